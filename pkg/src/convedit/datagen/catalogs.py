"""Entity catalogs: plain-text lists plus small built-in closed classes."""

from __future__ import annotations

from importlib import resources

from ..errors import DatasetError

FILE_DOMAINS = ("person", "place", "business", "media")

BUILTIN_DOMAINS: dict[str, list[str]] = {
    "pron_it": ["it"],
    "pron_subj": ["he", "she", "they"],
    "poss_pron": ["his", "her", "their"],
    "correction": ["I meant", "No I meant", "I said", "no I said", "no wait I meant"],
    "filler": ["uh I meant", "no I said", "um I mean", "no wait", "uh"],
    "bare_filler": ["uh", "um", "er", "ah"],
}

#: fraction of each file catalog reserved for the compositional train pool
TRAIN_POOL_FRACTION = 0.8


def _parse_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "[SEP]" in line:
            raise DatasetError(f"catalog entry {line!r} contains the separator token")
        out.append(line)
    return out


def load_catalogs(catalog_dir=None) -> dict[str, list[str]]:
    """Load all catalogs keyed by domain; surface forms are space-joined."""
    cats: dict[str, list[str]] = {}
    for domain in FILE_DOMAINS:
        if catalog_dir is not None:
            text = (catalog_dir / f"{domain}.txt").read_text(encoding="utf-8")
        else:
            text = (
                resources.files("convedit.data.catalogs")
                .joinpath(f"{domain}.txt")
                .read_text(encoding="utf-8")
            )
        entries = _parse_lines(text)
        if not entries:
            raise DatasetError(f"catalog {domain} is empty")
        cats[domain] = entries
    # possessive person forms: apostrophe-s on the final token
    cats["person_poss"] = [
        " ".join(p.split()[:-1] + [p.split()[-1] + "'s"]) for p in cats["person"]
    ]
    cats.update({k: list(v) for k, v in BUILTIN_DOMAINS.items()})
    return cats


def pool_slice(entries: list[str], pool: str) -> list[str]:
    """Deterministic train/eval partition of a catalog for compositional data.

    Closed-class domains (pronouns, correction phrases) are too small to
    split and are shared.
    """
    if len(entries) < 10:
        return entries
    cut = int(len(entries) * TRAIN_POOL_FRACTION)
    return entries[:cut] if pool == "train" else entries[cut:]
