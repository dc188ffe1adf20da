"""Rewrite relative date phrases to absolute ISO dates.

The rule table covers: today, yesterday, tomorrow, "N days ago",
last/this/next <weekday>, and last week/month/year. "last <weekday>" is the
most recent such weekday strictly before the publication date, "this" falls
within the publication week (Mon-Sun), and "next" is the first such weekday
strictly after. Coarse units render as ISO week (YYYY-Www), month (YYYY-MM)
or year (YYYY). The transform is idempotent: replacements contain no phrase
from the rule table.
"""

from __future__ import annotations

import re
from datetime import date, timedelta

_WEEKDAYS = ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"]
_NUMBER_WORDS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
}

_WD = "|".join(_WEEKDAYS)
_NUM = r"\d{1,4}|" + "|".join(_NUMBER_WORDS)
_RULE_RE = re.compile(
    rf"\b(?:"
    rf"(?P<days_ago>(?P<n>{_NUM})\s+days?\s+ago)"
    rf"|last\s+(?P<last_wd>{_WD})"
    rf"|this\s+(?P<this_wd>{_WD})"
    rf"|next\s+(?P<next_wd>{_WD})"
    rf"|last\s+(?P<coarse>week|month|year)"
    rf"|(?P<simple>today|yesterday|tomorrow)"
    rf")\b",
    re.IGNORECASE,
)


def _iso_week(d: date) -> str:
    iso = d.isocalendar()
    return f"{iso[0]}-W{iso[1]:02d}"


def _resolve(match: re.Match, publish_date: date) -> str:
    if match.group("days_ago"):
        raw_n = match.group("n").lower()
        n = _NUMBER_WORDS.get(raw_n) if raw_n in _NUMBER_WORDS else int(raw_n)
        return (publish_date - timedelta(days=n)).isoformat()
    if match.group("last_wd"):
        target = _WEEKDAYS.index(match.group("last_wd").lower())
        delta = (publish_date.weekday() - target) % 7 or 7
        return (publish_date - timedelta(days=delta)).isoformat()
    if match.group("this_wd"):
        target = _WEEKDAYS.index(match.group("this_wd").lower())
        monday = publish_date - timedelta(days=publish_date.weekday())
        return (monday + timedelta(days=target)).isoformat()
    if match.group("next_wd"):
        target = _WEEKDAYS.index(match.group("next_wd").lower())
        delta = (target - publish_date.weekday()) % 7 or 7
        return (publish_date + timedelta(days=delta)).isoformat()
    coarse = match.group("coarse")
    if coarse:
        coarse = coarse.lower()
        if coarse == "week":
            return _iso_week(publish_date - timedelta(days=7))
        if coarse == "month":
            first = publish_date.replace(day=1)
            prev = first - timedelta(days=1)
            return f"{prev.year}-{prev.month:02d}"
        return str(publish_date.year - 1)
    simple = match.group("simple").lower()
    offset = {"today": 0, "yesterday": -1, "tomorrow": 1}[simple]
    return (publish_date + timedelta(days=offset)).isoformat()


def normalize_relative_dates(text: str, publish_date: date | None) -> str:
    """Replace relative date phrases with ISO dates anchored at ``publish_date``.

    Without a publication date the text is returned unchanged.
    """
    if publish_date is None:
        return text
    return _RULE_RE.sub(lambda m: _resolve(m, publish_date), text)
