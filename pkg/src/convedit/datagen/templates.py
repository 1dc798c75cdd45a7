"""Query templates and their plain-text grammar.

Template file grammar (blocks separated by blank lines, ``#`` comments):

    template <id>
    pool train|eval
    usecases <UC> [<UC>]
    context <pattern>          # omit the line entirely for no context
    followup <pattern>
    sub <UC> <replacement-span-name> <replaced-span-name>
    dels <UC> <item> [...]     # item: sep | {slot-name} | literal token

Patterns are whitespace-tokenized.  ``{name=domain}`` is an entity slot.
``(name:`` opens a named span and a bare ``)`` closes it; spans may nest and
one extent may carry several names as ``(n1|n2:``.  All span/paren tokens
must be whitespace-separated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from ..edits import EditProgram, Span, Substitution, UseCase, UseCaseEdits, validate_program
from ..engine import apply_program
from ..errors import DatasetError
from ..tokens import concat_turns
from .catalogs import pool_slice


@dataclass(frozen=True)
class PatternItem:
    text: str | None = None      # literal token
    slot: str | None = None      # slot name
    domain: str | None = None


@dataclass
class QueryTemplate:
    id: str
    use_cases: frozenset[UseCase]
    pool: str                                      # "train" or "eval"
    context: list[PatternItem]
    followup: list[PatternItem]
    # span name -> (segment, item_start, item_end)
    spans: dict[str, tuple[str, int, int]]
    # use case -> (replacement span name, replaced span name)
    subs: dict[UseCase, tuple[str, str]]
    # use case -> list of deletion items ("sep", "{slot}", or literal)
    dels: dict[UseCase, list[str]]


def _parse_pattern(segment: str, text: str, spans: dict) -> list[PatternItem]:
    items: list[PatternItem] = []
    open_stack: list[tuple[list[str], int]] = []
    for tok in text.split():
        if tok.startswith("(") and tok.endswith(":"):
            names = tok[1:-1].split("|")
            open_stack.append((names, len(items)))
        elif tok == ")":
            if not open_stack:
                raise DatasetError(f"unbalanced ')' in pattern {text!r}")
            names, start = open_stack.pop()
            for name in names:
                if name in spans:
                    raise DatasetError(f"duplicate span name {name!r}")
                spans[name] = (segment, start, len(items))
        elif tok.startswith("{") and tok.endswith("}"):
            body = tok[1:-1]
            if "=" in body:
                name, domain = body.split("=", 1)
            else:
                raise DatasetError(f"slot {tok!r} must declare a domain on first use")
            items.append(PatternItem(slot=name, domain=domain))
        else:
            items.append(PatternItem(text=tok))
    if open_stack:
        raise DatasetError(f"unclosed span in pattern {text!r}")
    return items


def parse_templates(text: str) -> list[QueryTemplate]:
    templates: list[QueryTemplate] = []
    block: list[str] = []
    for raw in text.splitlines() + [""]:
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            block.append(line.strip())
            continue
        if block:
            templates.append(_parse_block(block))
            block = []
    ids = [t.id for t in templates]
    if len(ids) != len(set(ids)):
        raise DatasetError("duplicate template ids")
    return templates


def _parse_block(lines: list[str]) -> QueryTemplate:
    fields: dict[str, str] = {}
    subs: dict[UseCase, tuple[str, str]] = {}
    dels: dict[UseCase, list[str]] = {}
    for line in lines:
        key, _, rest = line.partition(" ")
        if key == "sub":
            uc_name, rep, old = rest.split()
            subs[UseCase[uc_name]] = (rep, old)
        elif key == "dels":
            parts = rest.split()
            dels[UseCase[parts[0]]] = parts[1:]
        else:
            if key in fields:
                raise DatasetError(f"duplicate field {key!r} in template block")
            fields[key] = rest
    spans: dict[str, tuple[str, int, int]] = {}
    context = _parse_pattern("context", fields.get("context", ""), spans)
    followup = _parse_pattern("followup", fields["followup"], spans)
    use_cases = frozenset(UseCase[u] for u in fields["usecases"].split())
    for uc in list(subs) + list(dels):
        if uc not in use_cases:
            raise DatasetError(f"edit for {uc} not among template use cases")
    return QueryTemplate(
        id=fields["template"],
        use_cases=use_cases,
        pool=fields.get("pool", "train"),
        context=context,
        followup=followup,
        spans=spans,
        subs=subs,
        dels=dels,
    )


def load_builtin_templates() -> list[QueryTemplate]:
    text = resources.files("convedit.data").joinpath("templates.txt").read_text("utf-8")
    return parse_templates(text)


@dataclass
class Instance:
    context: list[str]
    followup: list[str]
    rewrite: list[str]
    program: EditProgram


def instantiate(
    template: QueryTemplate,
    catalogs: dict[str, list[str]],
    rng: random.Random,
    restrict_pool: bool = False,
) -> Instance:
    """Fill a template's slots and build its gold program.

    The program is validated and applied before returning, so every instance
    is round-trip checked by construction.
    """
    # pick fillers; entities are distinct within one instance and domain
    slot_domains: dict[str, str] = {}
    for item in template.context + template.followup:
        if item.slot is not None:
            slot_domains[item.slot] = item.domain
    fillers: dict[str, list[str]] = {}
    used: dict[str, set[str]] = {}
    for name, domain in slot_domains.items():
        entries = catalogs[domain]
        if restrict_pool:
            entries = pool_slice(entries, template.pool)
        taken = used.setdefault(domain, set())
        choices = [e for e in entries if e not in taken] or entries
        pick = rng.choice(choices)
        taken.add(pick)
        fillers[name] = pick.split()

    # expand patterns; remember each item's token range per segment
    def expand(items):
        toks: list[str] = []
        ranges: list[tuple[int, int]] = []
        for item in items:
            start = len(toks)
            toks.extend(fillers[item.slot] if item.slot else [item.text])
            ranges.append((start, len(toks)))
        return toks, ranges

    ctx_toks, ctx_ranges = expand(template.context)
    fu_toks, fu_ranges = expand(template.followup)
    seq = concat_turns(ctx_toks, fu_toks)
    fu_offset = len(ctx_toks) + 1 if ctx_toks else 0

    def token_range(segment, i0, i1):
        ranges, offset = (ctx_ranges, 0) if segment == "context" else (fu_ranges, fu_offset)
        return ranges[i0][0] + offset, ranges[i1 - 1][1] + offset

    def span_of(name) -> Span:
        return Span(*token_range(*template.spans[name]))

    per: dict[UseCase, UseCaseEdits] = {}
    for uc in template.use_cases:
        sub = None
        if uc in template.subs:
            rep_name, old_name = template.subs[uc]
            sub = Substitution(uc, replacement=span_of(rep_name), replaced=span_of(old_name))
        deletions: set[int] = set()
        for item in template.dels.get(uc, []):
            if item == "sep":
                if seq.sep_index is None:
                    raise DatasetError(f"template {template.id} deletes sep without context")
                deletions.add(seq.sep_index)
            elif item.startswith("{") and item.endswith("}"):
                name = item[1:-1]
                hits = [
                    (seg, idx) for seg, items in (("context", template.context),
                                                  ("followup", template.followup))
                    for idx, it in enumerate(items) if it.slot == name
                ]
                if len(hits) != 1:
                    raise DatasetError(f"deletion slot {item} not unique in {template.id}")
                seg, idx = hits[0]
                lo, hi = token_range(seg, idx, idx + 1)
                deletions.update(range(lo, hi))
            else:
                hit = False
                for seg, items in (("context", template.context), ("followup", template.followup)):
                    for idx, it in enumerate(items):
                        if it.text == item:
                            lo, hi = token_range(seg, idx, idx + 1)
                            deletions.update(range(lo, hi))
                            hit = True
                if not hit:
                    raise DatasetError(f"deletion literal {item!r} not found in {template.id}")
        per[uc] = UseCaseEdits(uc, sub, frozenset(deletions))

    program = EditProgram.build(per)
    report = validate_program(seq, program)
    if not report.ok:
        raise DatasetError(
            f"template {template.id} instantiated an invalid program: "
            + "; ".join(v.message for v in report.violations)
        )
    result = apply_program(seq, program)
    if result.warnings:
        raise DatasetError(f"template {template.id} program was partially dropped")
    return Instance(ctx_toks, fu_toks, result.tokens, program)
