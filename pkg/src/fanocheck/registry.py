"""Family-level data: rationality criteria, torsor setups, F1 models.

File format (UTF-8 text)::

    schema_version = 1

    [family NAME]          # one block per family
    index = int            # Fano index, 1..4
    genus = int            # index 1 only
    degree = int           # index 2 only: H^3 of the ample generator
    hcube = int            # anticanonical degree (-K)^3
    criterion = atoms      # "always", or atoms joined by " & ": X(k), F1(k), F2(k), F3(k)
    criterion_note = text  # optional
    citation = text
    torsor = d_c d_tor N   # optional, three positive integers
    torsor_citation = text
    model = NAME           # optional, an F1 model block
    certificates = e=e1+e2; ...   # degenerations, terms may be m*e
    certificates_citation = text

    [model NAME]           # scheme of lines through a point of the ambient
    genus = int
    homogeneous = text     # ambient homogeneous variety
    embedding = int        # n, the model lives in P^n
    betti = i d m; ...     # (position, twist, multiplicity)
    complete = true|false
    hilbert = polynomial in t
    hilbert_source = text

Unknown keys, missing keys and violated relations are reported with the
file line and field.  ``FANO_DATA`` overrides the bundled file.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .eulerchar import BettiTable, HilbertPolynomial
from .linsys import genus_degree
from .torsors import TorsorError, TorsorSetup, condition_N, format_certificates, jac_multiplicativity, parse_certificates

SCHEMA_VERSION = 1
FAMILY_NAMES = ("P3", "Q3", "V4", "V5", "X12", "X16", "X18", "X22")
ATOMS = ("X(k)", "F1(k)", "F2(k)", "F3(k)")

FAMILY_KEYS = {
    "index": True,
    "genus": False,
    "degree": False,
    "hcube": True,
    "criterion": True,
    "criterion_note": False,
    "citation": True,
    "torsor": False,
    "torsor_citation": False,
    "model": False,
    "certificates": False,
    "certificates_citation": False,
}
MODEL_KEYS = {
    "genus": True,
    "homogeneous": True,
    "embedding": True,
    "betti": True,
    "complete": True,
    "hilbert": True,
    "hilbert_source": True,
}


class RegistryError(ValueError):
    def __init__(self, message: str, *, path: str = "", line: int | None = None, key: str = ""):
        where = path or "<registry>"
        if line is not None:
            where += f":{line}"
        if key:
            where += f" [{key}]"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.key = key


@dataclass(frozen=True)
class Criterion:
    atoms: tuple
    note: str = ""
    citation: str = ""

    @property
    def always(self) -> bool:
        return not self.atoms

    def text(self) -> str:
        if self.always:
            return "always rational"
        pretty = {"X(k)": "X(k) != 0", "F1(k)": "F1(X)(k) != 0", "F2(k)": "F2(X)(k) != 0", "F3(k)": "F3(X)(k) != 0"}
        return "rational iff " + " and ".join(pretty[a] for a in self.atoms)

    def holds(self, facts: dict) -> bool:
        """Evaluate on a dict like ``{"X(k)": True, "F1(k)": False}``."""
        return all(facts.get(a, False) for a in self.atoms)


@dataclass(frozen=True)
class F1Model:
    name: str
    genus: int
    homogeneous: str
    betti: BettiTable
    hilbert: HilbertPolynomial
    hilbert_text: str
    hilbert_source: str


@dataclass(frozen=True)
class FamilyRecord:
    name: str
    index: int
    hcube: int
    criterion: Criterion
    genus: int | None = None
    degree: int | None = None
    torsor_setup: TorsorSetup | None = None
    torsor_citation: str = ""
    model: str | None = None
    certificates: tuple = ()
    certificates_citation: str = ""

    @property
    def certificate_map(self) -> dict:
        return {e: list(parts) for e, parts in self.certificates}


@dataclass(frozen=True)
class Registry:
    families: dict
    models: dict
    schema_version: int = SCHEMA_VERSION
    source: str = field(default="", compare=False)

    def family(self, name: str) -> FamilyRecord:
        try:
            return self.families[name]
        except KeyError:
            raise RegistryError(f"unknown family {name!r}; known: {', '.join(self.families)}") from None

    def model_for_genus(self, g: int) -> F1Model:
        for m in self.models.values():
            if m.genus == g:
                return m
        raise RegistryError(f"no F1 model recorded for genus {g}")


_HEADER = re.compile(r"^\[(family|model)\s+(\S+)\]$")


def _blocks(text: str, path: str):
    top: dict = {}
    blocks = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _HEADER.match(line)
        if m:
            current = {"kind": m.group(1), "name": m.group(2), "line": lineno, "fields": {}}
            blocks.append(current)
            continue
        if line.startswith("["):
            raise RegistryError(f"malformed block header {line!r}", path=path, line=lineno)
        key, sep, value = line.partition("=")
        if not sep:
            raise RegistryError(f"expected 'key = value', got {line!r}", path=path, line=lineno)
        key, value = key.strip(), value.strip()
        target = current["fields"] if current else top
        if key in target:
            raise RegistryError("duplicate key", path=path, line=lineno, key=key)
        target[key] = (value, lineno)
    return top, blocks


def _int(fields, key, path, block_line):
    value, line = fields[key]
    try:
        return int(value)
    except ValueError:
        raise RegistryError(f"expected an integer, got {value!r}", path=path, line=line, key=key) from None


def _check_keys(block, allowed, path):
    for key, (_, line) in block["fields"].items():
        if key not in allowed:
            raise RegistryError(f"unknown key for a {block['kind']} block", path=path, line=line, key=key)
    for key, required in allowed.items():
        if required and key not in block["fields"]:
            raise RegistryError(
                f"missing required key in {block['kind']} {block['name']}", path=path, line=block["line"], key=key
            )


def _parse_model(block, path) -> F1Model:
    _check_keys(block, MODEL_KEYS, path)
    f = block["fields"]
    entries = []
    for chunk in filter(None, (c.strip() for c in f["betti"][0].split(";"))):
        parts = chunk.split()
        if len(parts) != 3:
            raise RegistryError(f"betti entry {chunk!r} needs 3 integers", path=path, line=f["betti"][1], key="betti")
        entries.append(tuple(int(p) for p in parts))
    complete = f["complete"][0].lower()
    if complete not in ("true", "false"):
        raise RegistryError("expected true or false", path=path, line=f["complete"][1], key="complete")
    try:
        betti = BettiTable(_int(f, "embedding", path, block["line"]), tuple(entries), complete == "true")
        hilbert = HilbertPolynomial.parse(f["hilbert"][0])
    except ValueError as exc:
        key = "hilbert" if "polynomial" in str(exc) else "betti"
        raise RegistryError(str(exc), path=path, line=f[key][1], key=key) from None
    if not hilbert.is_integer_valued():
        raise RegistryError("Hilbert polynomial is not integer-valued", path=path, line=f["hilbert"][1], key="hilbert")
    return F1Model(
        block["name"],
        _int(f, "genus", path, block["line"]),
        f["homogeneous"][0],
        betti,
        hilbert,
        f["hilbert"][0],
        f["hilbert_source"][0],
    )


def _parse_family(block, path) -> FamilyRecord:
    _check_keys(block, FAMILY_KEYS, path)
    f = block["fields"]
    name = block["name"]
    index = _int(f, "index", path, block["line"])
    hcube = _int(f, "hcube", path, block["line"])
    genus = _int(f, "genus", path, block["line"]) if "genus" in f else None
    degree = _int(f, "degree", path, block["line"]) if "degree" in f else None

    def fail(msg, key):
        line = f[key][1] if key in f else block["line"]
        raise RegistryError(msg, path=path, line=line, key=key)

    if index not in (1, 2, 3, 4):
        fail(f"index must be 1..4, got {index}", "index")
    if index == 1:
        if genus is None:
            fail("index 1 families need a genus", "genus")
        if hcube != 2 * genus - 2:
            fail(f"index 1 requires hcube = 2g - 2 = {2 * genus - 2}, got {hcube}", "hcube")
    elif genus is not None:
        fail("genus is only recorded for index 1", "genus")
    if index == 2:
        if degree is None:
            fail("index 2 families need a degree", "degree")
        if hcube != 8 * degree:
            fail(f"index 2 requires hcube = 8 * degree = {8 * degree}, got {hcube}", "hcube")
        if genus_degree(antik_cube=hcube, index=2).h0_H != degree + 2:
            fail("h0(O(H)) != degree + 2", "degree")
    elif degree is not None:
        fail("degree is only recorded for index 2", "degree")
    if index == 3 and hcube != 54:
        fail(f"index 3 requires hcube = 54, got {hcube}", "hcube")
    if index == 4 and hcube != 64:
        fail(f"index 4 requires hcube = 64, got {hcube}", "hcube")

    text = f["criterion"][0]
    atoms = () if text == "always" else tuple(a.strip() for a in text.split("&"))
    for a in atoms:
        if a not in ATOMS:
            fail(f"unknown criterion atom {a!r}; allowed: always, {', '.join(ATOMS)}", "criterion")
    criterion = Criterion(atoms, f.get("criterion_note", ("", 0))[0], f["citation"][0])

    setup = None
    if "torsor" in f:
        try:
            setup = TorsorSetup(*(int(x) for x in f["torsor"][0].split()))
        except (TypeError, ValueError) as exc:
            fail(f"torsor must be three integers d_c d_tor N: {exc}", "torsor")
        if not condition_N(setup):
            fail(f"torsor setup {setup} violates the gcd condition", "torsor")
        if f"F{setup.d_tor}(k)" not in atoms:
            fail(f"criterion must require F{setup.d_tor}(k) for torsor degree {setup.d_tor}", "torsor")
    elif any(a.startswith("F") for a in atoms):
        fail("criteria involving F_d(k) need a torsor setup", "criterion")

    certs = ()
    if "certificates" in f:
        try:
            parsed = parse_certificates(f["certificates"][0])
        except (TorsorError, ValueError) as exc:
            fail(str(exc), "certificates")
        certs = tuple(sorted((e, tuple(parts)) for e, parts in parsed.items()))
    if setup is not None:
        try:
            jac_multiplicativity(setup.d_tor, dict(certs))
        except TorsorError as exc:
            fail(str(exc), "certificates")

    return FamilyRecord(
        name=name,
        index=index,
        hcube=hcube,
        criterion=criterion,
        genus=genus,
        degree=degree,
        torsor_setup=setup,
        torsor_citation=f.get("torsor_citation", ("", 0))[0],
        model=f["model"][0] if "model" in f else None,
        certificates=certs,
        certificates_citation=f.get("certificates_citation", ("", 0))[0],
    )


def loads(text: str, path: str = "") -> Registry:
    top, blocks = _blocks(text, path)
    for key, (_, line) in top.items():
        if key != "schema_version":
            raise RegistryError("unknown top-level key", path=path, line=line, key=key)
    if "schema_version" not in top:
        raise RegistryError("missing schema_version", path=path, key="schema_version")
    version = _int(top, "schema_version", path, 0)
    if version != SCHEMA_VERSION:
        raise RegistryError(f"unsupported schema version {version}", path=path, line=top["schema_version"][1])
    families, models = {}, {}
    for b in blocks:
        target = families if b["kind"] == "family" else models
        if b["name"] in target:
            raise RegistryError(f"duplicate {b['kind']} {b['name']}", path=path, line=b["line"])
        target[b["name"]] = _parse_family(b, path) if b["kind"] == "family" else _parse_model(b, path)
    for rec in families.values():
        if rec.model is None:
            continue
        if rec.model not in models:
            raise RegistryError(f"family {rec.name} refers to unknown model {rec.model!r}", path=path, key="model")
        if models[rec.model].genus != rec.genus:
            raise RegistryError(f"model {rec.model} is recorded for another genus", path=path, key="model")
    return Registry(families, models, version, path)


def default_path() -> Path:
    override = os.environ.get("FANO_DATA")
    if override:
        return Path(override)
    return Path(str(resources.files("fanocheck") / "data" / "families.txt"))


def load_registry(path: str | os.PathLike | None = None) -> Registry:
    p = Path(path) if path is not None else default_path()
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise RegistryError(f"cannot read registry: {exc}", path=str(p)) from None
    return loads(text, str(p))


def load(path: str | os.PathLike | None = None) -> list[FamilyRecord]:
    return list(load_registry(path).families.values())


@lru_cache(maxsize=None)
def _cached(path: str) -> Registry:
    return load_registry(path)


def default_registry() -> Registry:
    return _cached(str(default_path()))


def criterion(name: str, registry: Registry | None = None) -> Criterion:
    reg = registry or default_registry()
    return reg.family(name).criterion


def f1_model_for_genus(g: int, registry: Registry | None = None) -> F1Model:
    reg = registry or default_registry()
    return reg.model_for_genus(g)


def dumps(reg: Registry) -> str:
    out = [f"schema_version = {reg.schema_version}", ""]
    for rec in reg.families.values():
        out.append(f"[family {rec.name}]")
        out.append(f"index = {rec.index}")
        if rec.genus is not None:
            out.append(f"genus = {rec.genus}")
        if rec.degree is not None:
            out.append(f"degree = {rec.degree}")
        out.append(f"hcube = {rec.hcube}")
        out.append("criterion = " + (" & ".join(rec.criterion.atoms) if rec.criterion.atoms else "always"))
        if rec.criterion.note:
            out.append(f"criterion_note = {rec.criterion.note}")
        out.append(f"citation = {rec.criterion.citation}")
        if rec.torsor_setup is not None:
            s = rec.torsor_setup
            out.append(f"torsor = {s.d_c} {s.d_tor} {s.N}")
        if rec.torsor_citation:
            out.append(f"torsor_citation = {rec.torsor_citation}")
        if rec.model is not None:
            out.append(f"model = {rec.model}")
        if rec.certificates or rec.certificates_citation:
            out.append(f"certificates = {format_certificates(dict(rec.certificates))}")
        if rec.certificates_citation:
            out.append(f"certificates_citation = {rec.certificates_citation}")
        out.append("")
    for m in reg.models.values():
        out.append(f"[model {m.name}]")
        out.append(f"genus = {m.genus}")
        out.append(f"homogeneous = {m.homogeneous}")
        out.append(f"embedding = {m.betti.ambient_dim}")
        out.append("betti = " + "; ".join(" ".join(str(x) for x in e) for e in m.betti.entries))
        out.append(f"complete = {'true' if m.betti.complete else 'false'}")
        out.append(f"hilbert = {m.hilbert_text}")
        out.append(f"hilbert_source = {m.hilbert_source}")
        out.append("")
    return "\n".join(out)
