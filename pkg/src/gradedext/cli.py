"""Command line front end: session files, commands, and the built-in corpus.

A session is a list of declarations, one per line (``#`` starts a comment)::

    ring Q = poly(field: QQ; vars: x:1, y:1, u:1, v:1)
    ring R = quotient(Q; x*v - y*u)
    module M = coker(R; rowdeg: [0]; coldeg: [1,1]; matrix: [[u, v]])

Further module forms: ``twist(M, a)``, ``sum(M, N, ...)``, ``residue(R)`` and
``free(R; rowdeg: [..])``.  Wherever a module is expected, a ring name stands
for the ring as a module over itself.
"""

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from ._expr import ExprError, evaluate
from .homalg import (
    InsufficientResolution,
    bass_numbers,
    ext_table,
    module_hilbert,
    tor_table,
)
from .invariants import (
    FAILS,
    IDENTITIES,
    MODES,
    agreement_level,
    bass_bound_for,
    canonical_hilbert,
    check_identity,
    check_prop2,
    check_theorem1,
    laurent_coeffs,
    multiplicity_poly,
    ring_dimension,
)
from .polyring import (
    INHOMOGENEOUS,
    Field,
    GradedMatrix,
    HomogeneityError,
    ModulePresentation,
    RingPresentation,
    WeightedRingSpec,
    format_poly,
    weighted_degree,
)
from .ratfun import Center, format_rational, laurent_expand
from .resolve import ResolutionError

DEFAULT_TERMS = 16
DEFAULT_MAX_I = 6
COMMANDS = ("hilbert", "expand", "coeffs", "ext", "tor", "bass", "verify", "agreement",
            "bass-bound", "canonical", "corpus")
VERIFY_TARGETS = ("theorem1", "prop2") + tuple("eq" + w if w[0].isdigit() else w for w in IDENTITIES)


class SessionError(ValueError):
    """Declaration error with a 1-based ``line`` and ``col``."""

    def __init__(self, message, line=0, col=0):
        super().__init__(f"line {line}, column {col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


class CommandError(ValueError):
    pass


# --- session ------------------------------------------------------------------

@dataclass
class Session:
    rings: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    parents: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, Session):
            return NotImplemented
        return self.rings == other.rings and self.modules == other.modules

    def names(self):
        return list(self.order)

    def ring(self, name):
        if name not in self.rings:
            raise CommandError(f"unknown ring {name!r}")
        return self.rings[name]

    def module(self, name):
        """Module by name; a ring name yields the ring as a module over itself."""
        if name in self.modules:
            return self.modules[name]
        if name in self.rings:
            return ModulePresentation.free(self.rings[name], (0,), name=name)
        raise CommandError(f"unknown module {name!r}")


_STATEMENT = re.compile(r"^\s*(ring|module)\s+([A-Za-z_][A-Za-z0-9_']*)\s*=\s*([a-z]+)\s*\((.*)\)\s*$")
_OPEN = "([{"
_CLOSE = ")]}"


def _split(text, sep, offset):
    """Split at top-level ``sep``; yields ``(piece, absolute column of piece start)``."""
    out = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
        elif ch == sep and depth == 0:
            out.append((text[start:i], offset + start))
            start = i + 1
    out.append((text[start:], offset + start))
    return out


def _strip(piece, col):
    lead = len(piece) - len(piece.lstrip())
    return piece.strip(), col + lead


def _keyed(parts, line):
    """``key: value`` fields -> ``{key: (value, col)}``."""
    out = {}
    for piece, col in parts:
        piece, col = _strip(piece, col)
        if not piece:
            continue
        m = re.match(r"([a-z]+)\s*:\s*", piece)
        if not m:
            raise SessionError(f"expected 'key: value', got {piece!r}", line, col + 1)
        key = m.group(1)
        if key in out:
            raise SessionError(f"duplicate field {key!r}", line, col + 1)
        out[key] = (piece[m.end():], col + m.end())
    return out


def _need(fields, key, line, col):
    if key not in fields:
        raise SessionError(f"missing field {key!r}", line, col + 1)
    return fields[key]


def _int_list(text, col, line):
    text, col = _strip(text, col)
    if not (text.startswith("[") and text.endswith("]")):
        raise SessionError("expected a bracketed list of integers", line, col + 1)
    inner = text[1:-1]
    if not inner.strip():
        return []
    out = []
    for piece, c in _split(inner, ",", col + 1):
        piece, c = _strip(piece, c)
        try:
            out.append(int(piece))
        except ValueError:
            raise SessionError(f"expected an integer, got {piece!r}", line, c + 1) from None
    return out


def _parse_poly(spec, text, col, line):
    text, col = _strip(text, col)
    names = {v: spec.var(v) for v in spec.variables}
    try:
        return evaluate(text, names, spec.constant)
    except ExprError as exc:
        raise SessionError(str(exc), line, col + exc.col + 1) from None


def _parse_field(text, col, line):
    text = text.strip()
    if text == "QQ":
        return Field()
    m = re.fullmatch(r"GF\((\d+)\)", text)
    if m:
        p = int(m.group(1))
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise SessionError(f"{p} is not prime", line, col + 1)
        return Field(p)
    raise SessionError(f"unknown field {text!r} (use QQ or GF(p))", line, col + 1)


def _parse_poly_ring(args, col, line, name):
    fields = _keyed(_split(args, ";", col), line)
    ftext, fcol = fields.get("field", ("QQ", col))
    fld = _parse_field(ftext, fcol, line)
    vtext, vcol = _need(fields, "vars", line, col)
    variables, weights = [], []
    for piece, c in _split(vtext, ",", vcol):
        piece, c = _strip(piece, c)
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*(?::\s*(-?\d+))?", piece)
        if not m:
            raise SessionError(f"expected 'name:weight', got {piece!r}", line, c + 1)
        w = int(m.group(2)) if m.group(2) else 1
        if w < 1:
            raise SessionError(f"weight of {m.group(1)} must be positive", line, c + 1)
        if m.group(1) in variables:
            raise SessionError(f"variable {m.group(1)!r} repeated", line, c + 1)
        variables.append(m.group(1))
        weights.append(w)
    if not variables:
        raise SessionError("a polynomial ring needs at least one variable", line, vcol + 1)
    spec = WeightedRingSpec(tuple(variables), tuple(weights), fld)
    return RingPresentation(spec, (), name)


def _ring_ref(session, text, col, line):
    text, col = _strip(text, col)
    if text not in session.rings:
        raise SessionError(f"unknown ring {text!r}", line, col + 1)
    return text, session.rings[text]


def _parse_quotient(session, args, col, line, name):
    parts = _split(args, ";", col)
    parent, base = _ring_ref(session, *parts[0], line)
    spec = base.ambient
    rels = list(base.relations)
    for piece, c in parts[1:]:
        for rel, rc in _split(piece, ",", c):
            rel, rc = _strip(rel, rc)
            if not rel:
                continue
            p = _parse_poly(spec, rel, rc, line)
            if p.is_zero():
                continue
            d = weighted_degree(p)
            if d == INHOMOGENEOUS:
                raise SessionError(f"relation {rel!r} is not homogeneous", line, rc + 1)
            if d <= 0:
                raise SessionError(f"relation {rel!r} must have positive degree", line, rc + 1)
            rels.append(p)
    return RingPresentation(spec, tuple(rels), name), session.parents.get(parent, parent)


def _parse_matrix(spec, text, col, line, nrows, ncols):
    text, col = _strip(text, col)
    if not (text.startswith("[") and text.endswith("]")):
        raise SessionError("matrix must be a bracketed list of rows", line, col + 1)
    inner = text[1:-1]
    rows = []
    if inner.strip():
        for rtext, rcol in _split(inner, ",", col + 1):
            rtext, rcol = _strip(rtext, rcol)
            if not (rtext.startswith("[") and rtext.endswith("]")):
                raise SessionError("each matrix row must be bracketed", line, rcol + 1)
            body = rtext[1:-1]
            row = []
            if body.strip():
                for etext, ecol in _split(body, ",", rcol + 1):
                    etext, ecol = _strip(etext, ecol)
                    row.append((_parse_poly(spec, etext, ecol, line), ecol))
            rows.append((row, rcol))
    if ncols == 0 and not rows:
        rows = [([], col)] * nrows
    if len(rows) != nrows:
        raise SessionError(f"matrix has {len(rows)} rows but rowdeg lists {nrows}", line, col + 1)
    return rows


def _parse_coker(session, args, col, line, name):
    parts = _split(args, ";", col)
    _, ring = _ring_ref(session, *parts[0], line)
    fields = _keyed(parts[1:], line)
    rowdeg = _int_list(*_need(fields, "rowdeg", line, col), line)
    cdtext, cdcol = fields.get("coldeg", ("[]", col))
    coldeg = _int_list(cdtext, cdcol, line)
    mtext, mcol = fields.get("matrix", ("[]", col))
    rows = _parse_matrix(ring.ambient, mtext, mcol, line, len(rowdeg), len(coldeg))
    entries = []
    for i, (row, rcol) in enumerate(rows):
        if len(row) != len(coldeg):
            raise SessionError(f"row {i + 1} has {len(row)} entries but coldeg lists {len(coldeg)}",
                               line, rcol + 1)
        out = []
        for j, (p, ecol) in enumerate(row):
            if not p.is_zero():
                d = weighted_degree(p)
                want = coldeg[j] - rowdeg[i]
                if d == INHOMOGENEOUS:
                    raise SessionError(f"matrix entry {format_poly(p)} is not homogeneous", line, ecol + 1)
                if d != want:
                    raise SessionError(
                        f"matrix entry {format_poly(p)} has degree {d}, expected {want}", line, ecol + 1)
            out.append(p)
        entries.append(out)
    try:
        mat = GradedMatrix(ring.ambient, entries, rowdeg, coldeg)
    except HomogeneityError as exc:
        raise SessionError(str(exc), line, col + 1) from None
    return ModulePresentation(ring, mat, name)


def _module_ref(session, text, col, line):
    text, col = _strip(text, col)
    try:
        return session.module(text)
    except CommandError:
        raise SessionError(f"unknown module {text!r}", line, col + 1) from None


def _parse_module(session, kind, args, col, line, name):
    if kind == "coker":
        return _parse_coker(session, args, col, line, name)
    if kind == "free":
        parts = _split(args, ";", col)
        _, ring = _ring_ref(session, *parts[0], line)
        fields = _keyed(parts[1:], line)
        rowdeg = _int_list(*fields.get("rowdeg", ("[0]", col)), line)
        return ModulePresentation.free(ring, tuple(rowdeg), name)
    if kind == "residue":
        _, ring = _ring_ref(session, args, col, line)
        return ModulePresentation.residue_field(ring, name)
    if kind == "twist":
        parts = _split(args, ",", col)
        if len(parts) != 2:
            raise SessionError("twist takes a module and an integer", line, col + 1)
        M = _module_ref(session, *parts[0], line)
        a_text, a_col = _strip(*parts[1])
        try:
            a = int(a_text)
        except ValueError:
            raise SessionError(f"expected an integer, got {a_text!r}", line, a_col + 1) from None
        tw = M.twist(a)
        return ModulePresentation(tw.ring, tw.matrix, name)
    if kind == "sum":
        parts = _split(args, ",", col)
        mods = [_module_ref(session, *p, line) for p in parts]
        out = mods[0]
        for m in mods[1:]:
            if m.ring != out.ring:
                raise SessionError("summands live over different rings", line, col + 1)
            out = out.direct_sum(m)
        return ModulePresentation(out.ring, out.matrix, name)
    raise SessionError(f"unknown module constructor {kind!r}", line, 1)


def parse_session(text):
    """Parse declarations into a :class:`Session`."""
    session = Session()
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        m = _STATEMENT.match(body)
        if not m:
            raise SessionError("expected 'ring NAME = ...' or 'module NAME = ...'", lineno,
                               len(body) - len(body.lstrip()) + 1)
        what, name, kind, args = m.groups()
        col = m.start(4)
        if name in session.rings or name in session.modules:
            raise SessionError(f"name {name!r} already declared", lineno, m.start(2) + 1)
        try:
            if what == "ring":
                if kind == "poly":
                    session.rings[name] = _parse_poly_ring(args, col, lineno, name)
                elif kind == "quotient":
                    ring, root = _parse_quotient(session, args, col, lineno, name)
                    session.rings[name] = ring
                    session.parents[name] = root
                else:
                    raise SessionError(f"unknown ring constructor {kind!r}", lineno, m.start(3) + 1)
            else:
                session.modules[name] = _parse_module(session, kind, args, col, lineno, name)
        except HomogeneityError as exc:
            raise SessionError(str(exc), lineno, col + 1) from None
        session.order.append(name)
    return session


def _render_int_list(xs):
    return "[" + ", ".join(str(x) for x in xs) + "]"


def render_session(session):
    """Declarations that parse back to an equal session."""
    lines = []
    for name in session.order:
        if name in session.rings:
            R = session.rings[name]
            if name in session.parents:
                rels = ", ".join(format_poly(r) for r in R.relations)
                lines.append(f"ring {name} = quotient({session.parents[name]}; {rels})")
            else:
                lines.append(f"ring {name} = {R.ambient}")
        else:
            M = session.modules[name]
            ring_name = next(n for n in session.order if n in session.rings and session.rings[n] == M.ring)
            mat = M.matrix
            rows = ", ".join("[" + ", ".join(format_poly(x) for x in row) + "]" for row in mat.entries)
            lines.append(f"module {name} = coker({ring_name}; rowdeg: {_render_int_list(mat.row_degrees)}; "
                         f"coldeg: {_render_int_list(mat.col_degrees)}; matrix: [{rows}])")
    return "\n".join(lines) + ("\n" if lines else "")


# --- corpus ------------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    name: str
    description: str
    declarations: str
    pairs: dict
    expected: tuple
    raw: dict

    def session(self):
        return parse_session(self.declarations)


def _corpus_files():
    return sorted(p for p in resources.files("gradedext").joinpath("corpus").iterdir()
                  if p.name.endswith(".json"))


def load_corpus():
    out = {}
    for path in _corpus_files():
        data = json.loads(path.read_text(encoding="utf-8"))
        out[data["name"]] = CorpusEntry(
            data["name"], data.get("description", ""), "\n".join(data["declarations"]) + "\n",
            {kind: tuple(tuple(p) for p in ps) for kind, ps in data.get("pairs", {}).items()},
            tuple(data.get("expected", [])), data)
    return out


def list_corpus():
    return sorted(load_corpus())


def corpus_entry(name):
    entries = load_corpus()
    if name not in entries:
        raise CommandError(f"unknown corpus entry {name!r}; available: {', '.join(sorted(entries))}")
    return entries[name]


# --- commands ------------------------------------------------------------------

@dataclass
class Options:
    center: Center = Center.ONE
    terms: int = DEFAULT_TERMS
    max_i: int = DEFAULT_MAX_I
    mode: object = None
    hypotheses: tuple = ()
    structured: bool = False
    strict: bool = False
    prime: int = 2
    verify: bool = False


@dataclass
class CommandResult:
    payload: dict
    text: str
    status: int = 0

    def render(self, structured=False):
        if structured:
            return json.dumps(self.payload, indent=2, ensure_ascii=False)
        return self.text


def _q(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _args(args, count, usage):
    if len(args) != count:
        raise CommandError(f"usage: {usage}")
    return args


def _cmd_hilbert(session, args, opts):
    (name,) = _args(args, 1, "hilbert MODULE")
    h = module_hilbert(session.module(name))
    s = format_rational(h)
    return CommandResult({"command": "hilbert", "module": name, "hilbert": s}, s)


def _cmd_expand(session, args, opts):
    (name,) = _args(args, 1, "expand MODULE")
    e = laurent_expand(module_hilbert(session.module(name)), opts.center, opts.terms)
    payload = {"command": "expand", "module": name, "center": opts.center.value,
               "order": e.order, "coefficients": [_q(c) for c in e.coefficients]}
    return CommandResult(payload, f"[{name}]_{opts.center.value} = {e}")


def _cmd_coeffs(session, args, opts):
    (name,) = _args(args, 1, "coeffs MODULE")
    M = session.module(name)
    v = laurent_coeffs(M, opts.terms - 1)
    lines = [f"d = {v.ring_dimension}"] + [f"f^{j} = {_q(c)}" for j, c in enumerate(v.coefficients)]
    payload = {"command": "coeffs", "module": name, "ring_dimension": v.ring_dimension,
               "coefficients": [_q(c) for c in v.coefficients]}
    return CommandResult(payload, "\n".join(lines))


def _series_table(kind, table, opts):
    sym = "Ext^{}" if kind == "ext" else "Tor_{}"
    lines = []
    entries = {}
    for i in range(opts.max_i + 1):
        s = format_rational(table[i])
        entries[str(i)] = s
        lines.append(f"{sym.format(i)} = {s}")
    if table.vanishing_certified:
        lines.append(f"{sym.format('i')} = 0 for i > {table.projective_dimension}")
    return entries, lines


def _cmd_ext(session, args, opts, kind="ext"):
    m, n = _args(args, 2, f"{kind} MODULE MODULE")
    M, N = session.module(m), session.module(n)
    table = (ext_table if kind == "ext" else tor_table)(M, N, opts.max_i)
    entries, lines = _series_table(kind, table, opts)
    payload = {"command": kind, "modules": [m, n], "series": entries,
               "vanishing_certified": table.vanishing_certified,
               "projective_dimension": table.projective_dimension}
    return CommandResult(payload, "\n".join(lines))


def _cmd_tor(session, args, opts):
    return _cmd_ext(session, args, opts, "tor")


def _cmd_bass(session, args, opts):
    (name,) = _args(args, 1, "bass MODULE")
    mu = bass_numbers(session.module(name), opts.max_i)
    payload = {"command": "bass", "module": name, "bass_numbers": [v for _, v in mu]}
    return CommandResult(payload, "\n".join(f"mu^{i} = {v}" for i, v in mu))


def _report_result(command, report, opts, extra=None):
    payload = {"command": command, "report": report.as_dict()}
    if extra:
        payload.update(extra)
    status = 1 if opts.strict and report.verdict == FAILS else 0
    return CommandResult(payload, str(report), status)


def _cmd_verify(session, args, opts):
    which, m, n = _args(args, 3, "verify IDENTITY MODULE MODULE")
    M, N = session.module(m), session.module(n)
    if which == "theorem1":
        ext = ext_table(M, N, opts.max_i)
        mode = opts.mode
        if mode is None and not ext.vanishing_certified:
            raise CommandError("Ext does not provably vanish; pass --mode finite-length or --mode periodic")
        report = check_theorem1(M, N, ext, mode, opts.max_i, opts.terms)
    elif which == "prop2":
        report = check_prop2(M, N, opts.max_i, opts.terms)
    else:
        label = which[2:] if which.startswith("eq") else which
        if label not in IDENTITIES:
            raise CommandError(f"unknown identity {which!r}; choose from {', '.join(VERIFY_TARGETS)}")
        report = check_identity(M, N, label, hypotheses=opts.hypotheses)
    return _report_result("verify", report, opts)


def _cmd_agreement(session, args, opts):
    m, n = _args(args, 2, "agreement MODULE MODULE")
    M, N = session.module(m), session.module(n)
    ext = ext_table(M, N, opts.max_i)
    level = agreement_level(M, N, ext, opts.max_i)
    if level > opts.max_i:
        text = f"agreement level: {level} (all levels through {opts.max_i} agree)"
    else:
        text = f"agreement level: {level}"
    payload = {"command": "agreement", "modules": [m, n], "max_level": opts.max_i, "level": level}
    return CommandResult(payload, text)


def _cmd_bass_bound(session, args, opts):
    (name,) = _args(args, 1, "bass-bound MODULE")
    N = session.module(name)
    b = bass_bound_for(N, opts.prime)
    mN = multiplicity_poly(N)
    d = ring_dimension(N.ring)
    lines = [f"d = {d}, n = {mN.n}, e_N(1) = {mN.e1}", str(b)]
    payload = {"command": "bass-bound", "module": name, "prime": opts.prime, "d": d, "n": mN.n,
               "divisible": b.divisible, "q": b.q,
               "bound": None if b.bound is None else str(b.bound),
               "caveats": list(b.caveats)}
    return CommandResult(payload, "\n".join(lines))


def _cmd_canonical(session, args, opts):
    (name,) = _args(args, 1, "canonical RING")
    R = session.ring(name)
    if not opts.verify:
        s = format_rational(canonical_hilbert(R))
        return CommandResult({"command": "canonical", "ring": name, "series": s}, s)
    chk = canonical_hilbert(R, verify=True)
    s = format_rational(chk.series)
    verdict = "holds" if chk.verified else "fails"
    lines = [s, f"verification: {verdict}"] + [f"note: {x}" for x in chk.notes]
    payload = {"command": "canonical", "ring": name, "series": s, "verification": verdict,
               "notes": list(chk.notes)}
    status = 1 if opts.strict and not chk.verified else 0
    return CommandResult(payload, "\n".join(lines), status)


def _cmd_corpus(session, args, opts):
    if not args:
        names = list_corpus()
        return CommandResult({"command": "corpus", "entries": names}, "\n".join(names))
    (name,) = _args(args, 1, "corpus [NAME]")
    entry = corpus_entry(name)
    text = render_session(entry.session()).rstrip("\n")
    return CommandResult({"command": "corpus", "name": name, "declarations": text.splitlines()}, text)


_DISPATCH = {
    "hilbert": _cmd_hilbert, "expand": _cmd_expand, "coeffs": _cmd_coeffs, "ext": _cmd_ext,
    "tor": _cmd_tor, "bass": _cmd_bass, "verify": _cmd_verify, "agreement": _cmd_agreement,
    "bass-bound": _cmd_bass_bound, "canonical": _cmd_canonical, "corpus": _cmd_corpus,
}


def run_command(session, command, args=(), options=None):
    """Run one command and return a :class:`CommandResult`."""
    opts = options or Options()
    if command not in _DISPATCH:
        raise CommandError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    return _DISPATCH[command](session, list(args), opts)


# --- argument parsing --------------------------------------------------------------

def parse_hypotheses(text):
    if not text:
        return ()
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if item in ("domain", "ufd", "normal", "cm") or re.fullmatch(r"(reg|gor)-codim=\d+", item):
            out.append(item)
        else:
            raise argparse.ArgumentTypeError(f"unknown hypothesis {item!r}")
    return tuple(out)


def build_parser():
    p = argparse.ArgumentParser(
        prog="gradedext",
        description="Hilbert series, Laurent coefficients and graded Ext/Tor over graded rings.")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--session", metavar="FILE", help="declaration file ('-' for stdin)")
    src.add_argument("--corpus", metavar="NAME", help="use a built-in corpus session")
    p.add_argument("--center", default="1", choices=("0", "1", "inf"))
    p.add_argument("--terms", type=int, default=DEFAULT_TERMS)
    p.add_argument("--max-i", type=int, default=DEFAULT_MAX_I)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--assert", dest="hypotheses", type=parse_hypotheses, default=(),
                   help="comma separated: domain, ufd, normal, cm, reg-codim=c, gor-codim=c")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--strict", action="store_true", help="exit with status 1 when a check fails")
    p.add_argument("--prime", type=int, default=2, help="prime for bass-bound")
    p.add_argument("--verify", action="store_true", help="cross-check canonical")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("args", nargs="*")
    return p


def _load_session(ns):
    if ns.corpus:
        return corpus_entry(ns.corpus).session()
    if ns.session:
        text = sys.stdin.read() if ns.session == "-" else open(ns.session, encoding="utf-8").read()
        return parse_session(text)
    return Session()


def main(argv=None):
    ns = build_parser().parse_args(argv)
    if ns.terms < 1 or ns.max_i < 0:
        print("error: --terms must be positive and --max-i non-negative", file=sys.stderr)
        return 2
    opts = Options(Center.parse(ns.center), ns.terms, ns.max_i, ns.mode, ns.hypotheses,
                   ns.format == "structured", ns.strict, ns.prime, ns.verify)
    try:
        session = _load_session(ns)
        result = run_command(session, ns.command, ns.args, opts)
    except SessionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CommandError, InsufficientResolution, ResolutionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(result.render(opts.structured))
    return result.status


if __name__ == "__main__":
    sys.exit(main())
