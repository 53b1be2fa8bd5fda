"""Tweet text cleaning: strip URLs, mentions, hashtags, emojis and control
characters, then normalize whitespace.

Pattern definitions (versioned here; tests carry an independent copy):

* URL      -- ``https?://`` or ``www.`` followed by non-whitespace
* mention  -- ``@`` followed by word characters
* hashtag  -- ``#`` followed by word characters
* emoji    -- code points in the Unicode blocks Emoticons, Miscellaneous
  Symbols and Pictographs, Transport and Map Symbols, Supplemental Symbols
  and Pictographs, Symbols and Pictographs Extended-A, plus variation
  selectors and the zero-width joiner; one contiguous run counts as a
  single removal
* control  -- Unicode category Cc except newline/tab, converted to a space

Processing order is control -> URL -> mention -> hashtag -> emoji, then
whitespace collapsing; every deleted match is replaced by a space so that
neighbouring words never fuse into new pattern matches.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
MENTION_RE = re.compile(r"@\w+")
HASHTAG_RE = re.compile(r"#\w+")
EMOJI_RE = re.compile(
    "["
    "\U0001F300-\U0001F5FF"  # Miscellaneous Symbols and Pictographs
    "\U0001F600-\U0001F64F"  # Emoticons
    "\U0001F680-\U0001F6FF"  # Transport and Map Symbols
    "\U0001F900-\U0001F9FF"  # Supplemental Symbols and Pictographs
    "\U0001FA70-\U0001FAFF"  # Symbols and Pictographs Extended-A
    "︀-️"          # variation selectors
    "‍"                 # zero-width joiner
    "]+"
)

HASHTAG_MODES = ("remove", "strip-marker")


@dataclass
class RemovalCounts:
    url: int = 0
    mention: int = 0
    hashtag: int = 0
    emoji: int = 0
    control: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "url": self.url,
            "mention": self.mention,
            "hashtag": self.hashtag,
            "emoji": self.emoji,
            "control": self.control,
        }

    def total(self) -> int:
        return self.url + self.mention + self.hashtag + self.emoji + self.control

    def __add__(self, other: "RemovalCounts") -> "RemovalCounts":
        return RemovalCounts(
            url=self.url + other.url,
            mention=self.mention + other.mention,
            hashtag=self.hashtag + other.hashtag,
            emoji=self.emoji + other.emoji,
            control=self.control + other.control,
        )


@dataclass
class CleanText:
    """Cleaned tweet text plus per-category removal counts."""

    text: str
    removals: RemovalCounts = field(default_factory=RemovalCounts)


def _convert_control(raw: str) -> tuple[str, int]:
    # Newline and tab stay as whitespace (collapsed later, not counted);
    # every other Cc character becomes a counted space.
    if not any(unicodedata.category(ch) == "Cc" for ch in raw):
        return raw, 0
    out: list[str] = []
    count = 0
    for ch in raw:
        if ch in ("\n", "\t"):
            out.append(" ")
        elif unicodedata.category(ch) == "Cc":
            out.append(" ")
            count += 1
        else:
            out.append(ch)
    return "".join(out), count


def clean_text(raw: str, hashtag_mode: str = "remove") -> CleanText:
    """Clean one raw tweet text.

    ``hashtag_mode`` is ``"remove"`` (delete the whole token, the default)
    or ``"strip-marker"`` (keep the word, drop the ``#``). Idempotent:
    cleaning an already clean text only re-collapses whitespace.
    """
    if hashtag_mode not in HASHTAG_MODES:
        raise ValueError(f"unknown hashtag_mode {hashtag_mode!r}")
    counts = RemovalCounts()

    text, counts.control = _convert_control(raw)

    text, counts.url = URL_RE.subn(" ", text)
    text, counts.mention = MENTION_RE.subn(" ", text)

    if hashtag_mode == "remove":
        text, counts.hashtag = HASHTAG_RE.subn(" ", text)
    else:
        # Iterate to a fixpoint so "##word" cannot leave a "#word" behind.
        while True:
            text, n = HASHTAG_RE.subn(lambda m: m.group(0)[1:], text)
            if n == 0:
                break
            counts.hashtag += n

    text, counts.emoji = EMOJI_RE.subn(" ", text)

    text = " ".join(text.split())
    return CleanText(text=text, removals=counts)
