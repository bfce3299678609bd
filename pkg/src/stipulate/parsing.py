"""Text formats: machine descriptions and ``key: value`` experiment configs.

Machine file::

    # comment
    states: q0 accept reject
    input_alphabet: 1
    tape_alphabet: 1 _
    blank: _
    start: q0
    accept: accept
    reject: reject
    q0 1 -> q0 1 R
    q0 _ -> accept _ R

An optional ``restart:`` header names a state whose entries are counted as
restarts.  Full-line comments start with ``#``.  Because ``#`` may also be a
tape symbol, a trailing comment is only recognised after the six fields of
a transition line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, InvalidMachineError, MachineParseError
from .machine import DEFAULT_BUDGET, L, R, MachineSpec

HEADERS = ("states", "input_alphabet", "tape_alphabet", "blank", "start", "accept", "reject")
OPTIONAL_HEADERS = ("restart",)
MOVES = {"L": L, "R": R}


def _symbols(tokens: list[str], line: int) -> list[str]:
    for t in tokens:
        if len(t) != 1 or not t.isprintable() or t.isspace():
            raise MachineParseError(f"symbol {t!r} is not a single visible character", line)
    return tokens


def parse_machine(text: str, name: str = "") -> MachineSpec:
    """Parse and validate a machine description."""
    headers: dict[str, tuple[list[str], int]] = {}
    rules: list[tuple[int, list[str]]] = []
    last = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last = number
        key, sep, rest = line.partition(":")
        if sep and key.strip() in HEADERS + OPTIONAL_HEADERS and "->" not in line:
            key = key.strip()
            if key in headers:
                raise MachineParseError(f"header {key!r} given twice", number)
            headers[key] = (rest.replace(",", " ").split(), number)
            continue
        tokens = line.split()
        if len(tokens) > 6 and tokens[6].startswith("#"):
            tokens = tokens[:6]
        if len(tokens) != 6 or tokens[2] != "->":
            raise MachineParseError(f"expected 'state symbol -> state symbol L|R', got {line!r}", number)
        rules.append((number, tokens))

    for key in HEADERS:
        if key not in headers:
            raise MachineParseError(f"missing header {key + ':'!r}", last or None)

    def single(key: str) -> str:
        values, number = headers[key]
        if len(values) != 1:
            raise MachineParseError(f"header {key!r} takes exactly one value", number)
        return values[0]

    states_line = headers["states"][1]
    states = set(headers["states"][0])
    input_alphabet = set(_symbols(*headers["input_alphabet"]))
    tape_alphabet = set(_symbols(*headers["tape_alphabet"]))
    blank = single("blank")
    _symbols([blank], headers["blank"][1])
    roles = {key: single(key) for key in ("start", "accept", "reject")}
    restart = single("restart") if "restart" in headers else None
    for key, q in list(roles.items()) + ([("restart", restart)] if restart else []):
        if q not in states:
            raise MachineParseError(f"{key} state {q!r} is not declared in states:", headers[key][1])

    transitions = {}
    halting = {roles["accept"], roles["reject"]}
    for number, (q, s, _, q2, w, m) in rules:
        for state in (q, q2):
            if state not in states:
                raise MachineParseError(f"unknown state {state!r}", number)
        for sym in (s, w):
            if sym not in tape_alphabet:
                raise MachineParseError(f"unknown symbol {sym!r}", number)
        if m not in MOVES:
            raise MachineParseError(f"move must be L or R, got {m!r}", number)
        if q in halting:
            raise MachineParseError(f"transition out of halting state {q!r}", number)
        if (q, s) in transitions:
            raise MachineParseError(f"duplicate transition for ({q}, {s})", number)
        transitions[(q, s)] = (q2, w, MOVES[m])

    try:
        return MachineSpec(
            states=states,
            input_alphabet=input_alphabet,
            tape_alphabet=tape_alphabet,
            blank=blank,
            transitions=transitions,
            start_state=roles["start"],
            accept_state=roles["accept"],
            reject_state=roles["reject"],
            restart_state=restart,
            name=name,
        )
    except InvalidMachineError as exc:
        if isinstance(exc, MachineParseError):
            raise
        line = states_line if "transition table" in str(exc) else None
        raise MachineParseError(str(exc), line) from None


def load_machine(path: str | Path) -> MachineSpec:
    path = Path(path)
    return parse_machine(path.read_text(), name=path.stem)


def format_machine(spec: MachineSpec) -> str:
    """Serialise a machine so that :func:`parse_machine` reads it back unchanged."""
    names = {L: "L", R: "R"}
    out = [f"# {spec.name}"] if spec.name else []
    out += [
        "states: " + " ".join(sorted(spec.states)),
        "input_alphabet: " + " ".join(sorted(spec.input_alphabet)),
        "tape_alphabet: " + " ".join(sorted(spec.tape_alphabet)),
        f"blank: {spec.blank}",
        f"start: {spec.start_state}",
        f"accept: {spec.accept_state}",
        f"reject: {spec.reject_state}",
    ]
    if spec.restart_state is not None:
        out.append(f"restart: {spec.restart_state}")
    for (q, s), (q2, w, m) in sorted(spec.transitions.items()):
        out.append(f"{q} {s} -> {q2} {w} {names[m]}")
    return "\n".join(out) + "\n"


# -- experiment configs -----------------------------------------------------


def split_list(value: str) -> list[str]:
    """Split ``[a, b, [c, d]]`` (brackets optional) on top-level commas."""
    value = value.strip()
    if value.startswith("[") and value.endswith("]"):
        value = value[1:-1]
    items, depth, current = [], 0, []
    for ch in value:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
            if depth < 0:
                raise ConfigError(f"unbalanced brackets in {value!r}")
        if ch == "," and depth == 0:
            items.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth:
        raise ConfigError(f"unbalanced brackets in {value!r}")
    items.append("".join(current))
    items = [item.strip().strip("'\"") for item in items]
    return [item for item in items if item]


@dataclass
class ExperimentConfig:
    problem: str | None = None
    machine_file: str | None = None
    inputs: list[str] = field(default_factory=list)
    intervals: list[str] = field(default_factory=list)
    region_start: int = 0
    budget: int = DEFAULT_BUDGET
    seed: int | None = None
    out: str | None = None
    c: str | None = None

    def validate(self) -> "ExperimentConfig":
        if (self.problem is None) == (self.machine_file is None):
            raise ConfigError("give exactly one of problem or machine_file")
        if self.budget < 1:
            raise ConfigError("budget must be at least 1")
        if self.machine_file is not None and not Path(self.machine_file).is_file():
            raise ConfigError(f"machine file not found: {self.machine_file}")
        return self


_VARIANT_KEYS = ("lhs", "rhs", "assign", "matrix_a", "matrix_b", "matrix", "u", "k")
_KNOWN_KEYS = (
    "problem", "machine_file", "input", "inputs", "interval", "intervals",
    "region_start", "budget", "seed", "out", "c",
) + _VARIANT_KEYS


def _int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def _variant_input(problem: str, fields: dict[str, str]) -> str | None:
    """Build an input text from per-problem fields such as ``lhs``/``rhs``."""
    problem = problem.split("-")[0]
    if problem == "pr" and {"lhs", "rhs"} <= fields.keys():
        return f"{fields['lhs']}+{fields['rhs']}"
    if problem == "p1" and "assign" in fields:
        return fields["assign"]
    if problem in ("p2", "p3") and {"matrix_a", "matrix_b"} <= fields.keys():
        return f"[{fields['matrix_a']},{fields['matrix_b']}]"
    if problem in ("p5", "p6") and ("matrix_a" in fields or "matrix" in fields):
        return fields.get("matrix_a", fields.get("matrix"))
    if problem == "p4" and {"u", "k"} <= fields.keys():
        return f"{fields['u']}#{'1' * _int('k', fields['k'])}"
    if fields:
        raise ConfigError(f"fields {sorted(fields)} do not form an input for problem {problem!r}")
    return None


def parse_config(text: str, base: Path | None = None) -> ExperimentConfig:
    raw: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key = key.strip().replace("-", "_")
        if not sep:
            raise ConfigError(f"line {number}: expected 'key: value'")
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {number}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {number}: key {key!r} given twice")
        raw[key] = value.strip()

    cfg = ExperimentConfig()
    cfg.problem = raw.get("problem")
    if "machine_file" in raw:
        path = Path(raw["machine_file"])
        cfg.machine_file = str(base / path if base is not None and not path.is_absolute() else path)
    variant = {k: raw[k] for k in _VARIANT_KEYS if k in raw}
    if variant:
        if cfg.problem is None:
            raise ConfigError("problem fields given without a problem")
        cfg.inputs.append(_variant_input(cfg.problem, variant))
    if "input" in raw:
        cfg.inputs.append(raw["input"])
    if "inputs" in raw:
        cfg.inputs.extend(split_list(raw["inputs"]))
    if "interval" in raw:
        cfg.intervals.append(raw["interval"])
    if "intervals" in raw:
        cfg.intervals.extend(split_list(raw["intervals"]))
    if "region_start" in raw:
        cfg.region_start = _int("region_start", raw["region_start"])
    if "budget" in raw:
        cfg.budget = _int("budget", raw["budget"])
    if "seed" in raw:
        cfg.seed = _int("seed", raw["seed"])
    cfg.out = raw.get("out")
    cfg.c = raw.get("c")
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, base=path.parent)
