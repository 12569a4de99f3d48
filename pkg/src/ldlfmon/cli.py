"""Command-line front end: ``ldlfmon monitor|compile|check|eval``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence

from .automata import (
    Alphabet, StateLimitExceeded, UnknownSymbol, check_satisfiable, formula_automaton,
    formula_dfa, ldlf_to_nfa, prefix_automaton, to_dot, to_regex,
)
from .declare import DeclareModel, InconsistentModel, ModelError, check_consistency, dead_tasks
from .declare.patterns import UnknownPattern, instantiate_pattern
from .formula import LdlfFormula, atoms, ltlf_to_ldlf, valid_identifier
from .monitor import Monitor, RvVerdict, build_monitor
from .semantics import satisfies
from .syntax import ParseError, parse_ldlf, parse_ltlf, render

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_SYNTAX = 4
EXIT_TRACE = 5
EXIT_MODEL = 6
EXIT_SYMBOL = 7
EXIT_STATES = 8


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# trace input


@dataclass(frozen=True)
class EventRecord:
    task: str | None = None
    props: frozenset[str] | None = None
    timestamp: str | None = None
    line: int = 0

    @property
    def event(self):
        return self.task if self.task is not None else self.props

    @property
    def label(self) -> str:
        if self.task is not None:
            return self.task
        return "{" + ",".join(sorted(self.props)) + "}"


class TraceError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def iter_trace(lines: Iterable[str]) -> Iterator[EventRecord]:
    """Parse JSON Lines lazily. Blank lines are skipped."""
    mode = None
    for number, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise TraceError(f"malformed JSON ({exc.msg})", number) from None
        if not isinstance(obj, dict):
            raise TraceError("expected a JSON object", number)
        extra = set(obj) - {"task", "props", "timestamp"}
        if extra:
            raise TraceError(f"unexpected field(s): {', '.join(sorted(extra))}", number)
        if ("task" in obj) == ("props" in obj):
            raise TraceError("exactly one of 'task' and 'props' is required", number)
        ts = obj.get("timestamp")
        if ts is not None and not isinstance(ts, str):
            raise TraceError("'timestamp' must be a string", number)
        if "task" in obj:
            task = obj["task"]
            if not isinstance(task, str) or not valid_identifier(task):
                raise TraceError(f"invalid task name {task!r}", number)
            rec = EventRecord(task=task, timestamp=ts, line=number)
        else:
            props = obj["props"]
            if not isinstance(props, list) or not all(
                    isinstance(p, str) and valid_identifier(p) for p in props):
                raise TraceError("'props' must be a list of proposition names", number)
            rec = EventRecord(props=frozenset(props), timestamp=ts, line=number)
        kind = "task" if rec.task is not None else "props"
        if mode is None:
            mode = kind
        elif kind != mode:
            raise TraceError(f"'{kind}' event in a trace of '{mode}' events", number)
        yield rec


def load_trace(source: str | IO[str] | None = None) -> list[EventRecord]:
    """Read a whole trace from a path, an open file, or stdin ("-" or None)."""
    if source is None or source == "-":
        return list(iter_trace(sys.stdin))
    if isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            return list(iter_trace(fh))
    return list(iter_trace(source))


# --------------------------------------------------------------------------
# shared helpers


def _parse_formula(text: str, ltlf: bool) -> LdlfFormula:
    try:
        return ltlf_to_ldlf(parse_ltlf(text)) if ltlf else parse_ldlf(text)
    except ParseError as exc:
        raise CliError(f"syntax error: {exc}", EXIT_SYNTAX) from None


def _split_names(text: str, what: str) -> list[str]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    bad = [x for x in names if not valid_identifier(x)]
    if bad:
        raise CliError(f"invalid {what} name(s): {', '.join(bad)}", EXIT_USAGE)
    if len(set(names)) != len(names):
        raise CliError(f"duplicate {what} names", EXIT_USAGE)
    if not names:
        raise CliError(f"empty {what} list", EXIT_USAGE)
    return names


def _formula_from_args(args) -> LdlfFormula:
    if args.pattern is not None:
        if args.formula is not None:
            raise CliError("give either a formula or --pattern, not both", EXIT_USAGE)
        params = _split_names(args.params or "", "parameter") if args.params else []
        try:
            return instantiate_pattern(args.pattern, params)
        except UnknownPattern as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
    if args.formula is None:
        raise CliError("a formula (or --pattern) is required", EXIT_USAGE)
    return _parse_formula(args.formula, args.ltlf)


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _open_trace(path: str | None) -> IO[str]:
    if path is None or path == "-":
        return sys.stdin
    try:
        return open(path, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None


def _monitor_dot(m: Monitor, name: str) -> str:
    return to_dot(m.dfa, name, {q: str(c) for q, c in enumerate(m.colors)})


# --------------------------------------------------------------------------
# monitor


@dataclass
class _Row:
    id: str
    label: str
    monitor: Monitor
    verdicts: list[RvVerdict] = field(default_factory=list)


class _Session:
    """Monitors for every row, fed one event at a time.

    Rows whose verdict became stable stop consuming events; the verdict is
    repeated for the rest of the trace.
    """

    def __init__(self, rows: list[_Row], project: frozenset[str] | None):
        self.rows = rows
        self.project = project
        for r in rows:
            r.verdicts.append(r.monitor.verdict)

    def feed(self, rec: EventRecord) -> list[RvVerdict]:
        event = rec.event
        if self.project is not None and rec.props is not None:
            event = rec.props & self.project
        alphabet = self.rows[0].monitor.alphabet
        try:
            alphabet.symbol_for(event)
        except UnknownSymbol as exc:
            raise CliError(f"line {rec.line}: {exc}", EXIT_SYMBOL) from None
        out = []
        for r in self.rows:
            v = r.verdicts[-1]
            if not v.stable:
                v = r.monitor.step(event)
            r.verdicts.append(v)
            out.append(v)
        return out

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if any(r.verdicts[-1] is RvVerdict.FALSE for r in self.rows) else EXIT_OK


def _formula_alphabet(f: LdlfFormula, given: str | None, first: EventRecord | None,
                      records: Sequence[EventRecord] | None):
    """Alphabet for monitoring a single formula, plus the props projection."""
    if given is not None:
        names = _split_names(given, "alphabet")
        if first is not None and first.props is not None:
            return Alphabet.powerset(names), None
        return Alphabet.of_tasks(names), None
    if first is not None and first.task is not None:
        if records is None:
            raise CliError("--follow with task events needs --alphabet", EXIT_USAGE)
        tasks = sorted(set(atoms(f)) | {r.task for r in records})
        return Alphabet.of_tasks(tasks), None
    props = frozenset(atoms(f))
    return Alphabet.powerset(props), props


def _build_rows(args, first: EventRecord | None, records) -> tuple[list[_Row], frozenset | None]:
    if args.model is not None:
        if args.formula is not None or args.pattern is not None:
            raise CliError("give either --model or a formula, not both", EXIT_USAGE)
        if args.alphabet is not None:
            raise CliError("--alphabet cannot be combined with --model", EXIT_USAGE)
        model = _load_model(args.model)
        if first is not None and first.props is not None:
            raise CliError(f"line {first.line}: a Declare model needs task events", EXIT_SYMBOL)
        monitors = model.monitors()
        return [_Row(rid, model.label(rid), monitors[rid]) for rid in model.row_ids()], None
    f = _formula_from_args(args)
    alphabet, project = _formula_alphabet(f, args.alphabet, first, records)
    return [_Row("formula", render(f), build_monitor(f, alphabet))], project


def _load_model(path: str) -> DeclareModel:
    try:
        return DeclareModel.load(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None
    except ModelError as exc:
        raise CliError(f"invalid model: {exc}", EXIT_MODEL) from None


def _render_batch(rows: list[_Row], records: list[EventRecord], fmt: str, out: IO[str]) -> None:
    heads = ["start"] + [r.label for r in records]
    if fmt == "json":
        doc = {
            "events": [{"index": i + 1, "event": r.label, "timestamp": r.timestamp}
                       for i, r in enumerate(records)],
            "rows": [{"id": r.id, "label": r.label, "verdicts": [str(v) for v in r.verdicts]}
                     for r in rows],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    table = [["constraint", *heads]] + [[r.id, *map(str, r.verdicts)] for r in rows]
    if fmt == "tsv":
        for line in table:
            out.write("\t".join(line) + "\n")
        return
    widths = [max(len(line[c]) for line in table) for c in range(len(table[0]))]
    for line in table:
        out.write("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() + "\n")


class _FollowPrinter:
    """One output line per event; the column layout is transposed."""

    def __init__(self, rows: list[_Row], fmt: str, out: IO[str]):
        self.rows, self.fmt, self.out = rows, fmt, out
        self.widths = [max(len(r.id), len("temp_false")) for r in rows]
        if fmt == "tsv":
            self._line(["step", "event", *(r.id for r in rows)])
        elif fmt == "table":
            self._line(["step", "event".ljust(16), *(r.id.ljust(w) for r, w in zip(rows, self.widths))])
        self.emit(0, "start", None, [r.verdicts[0] for r in rows])

    def _line(self, cells):
        sep = "\t" if self.fmt == "tsv" else "  "
        self.out.write(sep.join(cells).rstrip() + "\n")
        self.out.flush()

    def emit(self, step: int, label: str, ts: str | None, verdicts: list[RvVerdict]) -> None:
        if self.fmt == "json":
            doc = {"step": step, "event": label, "timestamp": ts,
                   "verdicts": {r.id: str(v) for r, v in zip(self.rows, verdicts)}}
            self.out.write(json.dumps(doc) + "\n")
            self.out.flush()
        elif self.fmt == "tsv":
            self._line([str(step), label, *map(str, verdicts)])
        else:
            self._line([str(step).ljust(4), label.ljust(16),
                        *(str(v).ljust(w) for v, w in zip(verdicts, self.widths))])


def cmd_monitor(args, out: IO[str]) -> int:
    fh = _open_trace(args.trace)
    try:
        if args.follow:
            return _monitor_follow(args, fh, out)
        try:
            records = list(iter_trace(fh))
        except TraceError as exc:
            raise CliError(f"bad trace: {exc}", EXIT_TRACE) from None
        rows, project = _build_rows(args, records[0] if records else None, records)
        session = _Session(rows, project)
        for rec in records:
            session.feed(rec)
        _maybe_dot(args, rows)
        _render_batch(rows, records, args.format, out)
        return session.exit_code
    finally:
        if fh is not sys.stdin:
            fh.close()


def _monitor_follow(args, fh: IO[str], out: IO[str]) -> int:
    stream = iter_trace(iter(fh.readline, ""))
    try:
        first = next(stream, None)
    except TraceError as exc:
        raise CliError(f"bad trace: {exc}", EXIT_TRACE) from None
    rows, project = _build_rows(args, first, None)
    _maybe_dot(args, rows)
    session = _Session(rows, project)
    printer = _FollowPrinter(rows, args.format, out)
    step = 0
    rec = first
    while rec is not None:
        step += 1
        printer.emit(step, rec.label, rec.timestamp, session.feed(rec))
        try:
            rec = next(stream, None)
        except TraceError as exc:
            raise CliError(f"bad trace: {exc}", EXIT_TRACE) from None
    return session.exit_code


def _maybe_dot(args, rows: list[_Row]) -> None:
    if args.dot:
        _write(args.dot, "".join(_monitor_dot(r.monitor, r.id) for r in rows))


# --------------------------------------------------------------------------
# compile / check / eval


def cmd_compile(args, out: IO[str]) -> int:
    f = _formula_from_args(args)
    if args.alphabet is not None:
        alphabet = Alphabet.of_tasks(_split_names(args.alphabet, "alphabet"))
        unknown = sorted(atoms(f) - set(alphabet.task_names))
        if unknown:
            raise CliError(f"formula mentions names outside the alphabet: {', '.join(unknown)}",
                           EXIT_SYMBOL)
    else:
        alphabet = Alphabet.for_formula(f)
    wanted = [k for k in ("nfa", "dfa", "monitor") if getattr(args, k)]
    if args.dot and len(wanted) != 1:
        raise CliError("--dot needs exactly one of --nfa, --dfa, --monitor", EXIT_USAGE)
    if not (wanted or args.pref or args.stats):
        args.stats = True

    dots = []
    for kind in wanted:
        if kind == "nfa":
            dots.append(to_dot(formula_automaton(f, alphabet), "nfa"))
        elif kind == "dfa":
            dots.append(to_dot(formula_dfa(f, alphabet), "dfa"))
        else:
            dots.append(_monitor_dot(build_monitor(f, alphabet), "monitor"))
    if args.dot:
        _write(args.dot, dots[0])
    else:
        for text in dots:
            out.write(text)

    if args.pref:
        out.write(render(to_regex(prefix_automaton(formula_dfa(f, alphabet)))) + "\n")

    if args.stats:
        marked = ldlf_to_nfa(f, alphabet)
        nfa = formula_automaton(f, alphabet)
        dfa = formula_dfa(f, alphabet)
        stats = {
            "formula": render(f),
            "alphabet_size": len(alphabet),
            "marked_nfa_states": marked.num_states,
            "nfa_states": nfa.num_states,
            "nfa_transitions": nfa.num_transitions,
            "dfa_states": dfa.num_states,
            "dfa_transitions": dfa.num_states * len(alphabet),
            "empty_language": not check_satisfiable(f, alphabet),
        }
        _render_mapping(stats, args.format, out)
    return EXIT_OK


def _render_mapping(data: dict, fmt: str, out: IO[str]) -> None:
    if fmt == "json":
        out.write(json.dumps(data, indent=2) + "\n")
        return
    sep = "\t" if fmt == "tsv" else ": "
    for k, v in data.items():
        v = str(v).lower() if isinstance(v, bool) else v
        out.write(f"{k}{sep}{v}\n")


def cmd_check(args, out: IO[str]) -> int:
    model = _load_model(args.model_file)
    consistent = check_consistency(model)
    dead = dead_tasks(model) if consistent else []
    if args.format == "json":
        out.write(json.dumps({"consistent": consistent, "dead_tasks": dead}) + "\n")
    elif not consistent:
        out.write("inconsistent\n")
    elif dead:
        out.write(f"consistent, dead tasks: {', '.join(dead)}\n")
    else:
        out.write("consistent, no dead tasks\n")
    return EXIT_OK if consistent and not dead else EXIT_FAIL


def cmd_eval(args, out: IO[str]) -> int:
    f = _formula_from_args(args)
    fh = _open_trace(args.trace)
    try:
        records = list(iter_trace(fh))
    except TraceError as exc:
        raise CliError(f"bad trace: {exc}", EXIT_TRACE) from None
    finally:
        if fh is not sys.stdin:
            fh.close()
    if args.alphabet is not None:
        names = set(_split_names(args.alphabet, "alphabet"))
        for r in records:
            outside = ({r.task} if r.task is not None else set(r.props)) - names
            if outside:
                raise CliError(f"line {r.line}: {', '.join(sorted(outside))} not in the alphabet",
                               EXIT_SYMBOL)
    trace = [{r.task} if r.task is not None else set(r.props) for r in records]
    result = satisfies(trace, f)
    _render_mapping({"formula": render(f), "length": len(trace), "satisfied": result},
                    args.format, out)
    return EXIT_OK if result else EXIT_FAIL


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--alphabet", metavar="a,b,c",
                        help="explicit alphabet: task names, or propositions for props traces")
    shared.add_argument("--format", choices=("table", "tsv", "json"), default="table")
    shared.add_argument("--follow", action="store_true",
                        help="process the trace line by line as it arrives")
    shared.add_argument("--dot", metavar="PATH", help="write Graphviz output to PATH")

    formula = argparse.ArgumentParser(add_help=False)
    formula.add_argument("formula", nargs="?", help="LDLf formula text")
    formula.add_argument("--ltlf", action="store_true", help="read the formula as LTLf")
    formula.add_argument("--pattern", help="use a Declare pattern instead of a formula")
    formula.add_argument("--params", metavar="a,b", help="pattern parameters")

    p = argparse.ArgumentParser(prog="ldlfmon", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("monitor", parents=[shared, formula], help="print verdicts after every event")
    m.add_argument("--model", help="Declare model file (JSON)")
    m.add_argument("--trace", "-t", help="JSON Lines trace (default: stdin)")
    m.set_defaults(run=cmd_monitor)

    c = sub.add_parser("compile", parents=[shared, formula], help="build automata and artifacts")
    c.add_argument("--nfa", action="store_true", help="emit the NFA as DOT")
    c.add_argument("--dfa", action="store_true", help="emit the minimal DFA as DOT")
    c.add_argument("--monitor", action="store_true", help="emit the verdict-colored DFA as DOT")
    c.add_argument("--pref", action="store_true", help="print a regex for the good prefixes")
    c.add_argument("--stats", action="store_true", help="print automaton sizes")
    c.set_defaults(run=cmd_compile)

    k = sub.add_parser("check", parents=[shared], help="consistency and dead tasks of a model")
    k.add_argument("model_file")
    k.set_defaults(run=cmd_check)

    e = sub.add_parser("eval", parents=[shared, formula], help="evaluate a formula on a trace")
    e.add_argument("--trace", "-t", help="JSON Lines trace (default: stdin)")
    e.set_defaults(run=cmd_eval)
    return p


def main(argv: Sequence[str] | None = None, out: IO[str] | None = None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except CliError as exc:
        print(f"ldlfmon: {exc}", file=sys.stderr)
        return exc.code
    except StateLimitExceeded as exc:
        print(f"ldlfmon: {exc}", file=sys.stderr)
        return EXIT_STATES
    except InconsistentModel as exc:
        print(f"ldlfmon: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        # a malformed LDLFMON_MAX_STATES ends up here
        print(f"ldlfmon: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
