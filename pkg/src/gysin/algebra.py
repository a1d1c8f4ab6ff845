"""Sparse multivariate (Laurent) polynomials with exact rational coefficients.

Every other module computes inside these rings.  A :class:`VarSet` fixes the
variable names and their integer weights; the weighted degree of a monomial
is ``sum(exponent * weight)``.  Monomials are plain exponent tuples aligned
with the variable set.  Polynomials are immutable after construction and all
operations are pure, so values can be shared freely between threads.

Term output order is canonical (graded lexicographic, highest first), which
makes every text/JSON emission byte-stable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping

Rational = Fraction

Monomial = tuple[int, ...]


class ContractViolation(ValueError):
    """A caller broke a documented precondition."""


class ConsistencyError(ArithmeticError):
    """An exactness invariant failed internally; this signals a bug."""


@dataclass(frozen=True)
class VarSet:
    """An ordered set of named variables with per-variable weights."""

    names: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.weights):
            raise ContractViolation("names and weights must have equal length")
        if len(set(self.names)) != len(self.names):
            raise ContractViolation(f"duplicate variable names in {self.names}")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ContractViolation(f"unknown variable {name!r}") from None

    def adjoin(self, other: "VarSet") -> "VarSet":
        return VarSet(self.names + other.names, self.weights + other.weights)

    def monomial_weight(self, exps: Monomial) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))


def chern_vars(r: int) -> VarSet:
    """Variables c1..cr, weight of cj is j."""
    return VarSet(tuple(f"c{j}" for j in range(1, r + 1)), tuple(range(1, r + 1)))


def segre_vars(n: int) -> VarSet:
    """Variables s1..sn, weight of sj is j."""
    return VarSet(tuple(f"s{j}" for j in range(1, n + 1)), tuple(range(1, n + 1)))


def root_vars(r: int) -> VarSet:
    """Chern-root variables t1..tr, each of weight 1."""
    return VarSet(tuple(f"t{j}" for j in range(1, r + 1)), (1,) * r)


def formal_vars(m: int) -> VarSet:
    """Formal variables u1..um, each of weight 1."""
    return VarSet(tuple(f"u{j}" for j in range(1, m + 1)), (1,) * m)


def param_vars(names: Iterable[str]) -> VarSet:
    """Weight-0 parameters (symbolic scalars carried through computations)."""
    names = tuple(names)
    return VarSet(names, (0,) * len(names))


class SparsePoly:
    """Immutable sparse polynomial: a map from exponent tuples to rationals.

    With ``laurent=True`` negative exponents are permitted; plain rings
    reject them at construction.
    """

    __slots__ = ("varset", "terms", "laurent")

    def __init__(self, varset: VarSet,
                 terms: Mapping[Monomial, Fraction | int] | None = None,
                 laurent: bool = False):
        nvars = len(varset)
        clean: dict[Monomial, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ContractViolation(
                    f"monomial {exps} has {len(exps)} exponents, expected {nvars}")
            if not all(isinstance(e, int) for e in exps):
                raise ContractViolation(f"non-integer exponent in {exps}")
            if not laurent and any(e < 0 for e in exps):
                raise ContractViolation(
                    f"negative exponent in {exps} on a non-Laurent ring")
            coeff = Fraction(coeff)
            if coeff:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
                if not clean[exps]:
                    del clean[exps]
        object.__setattr__(self, "varset", varset)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "laurent", laurent)

    def __setattr__(self, *args):  # immutability guard
        raise AttributeError("SparsePoly is immutable")

    @classmethod
    def _raw(cls, varset: VarSet, terms: dict[Monomial, Fraction],
             laurent: bool) -> "SparsePoly":
        # internal fast path: terms already normalized
        self = object.__new__(cls)
        object.__setattr__(self, "varset", varset)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "laurent", laurent)
        return self

    @classmethod
    def zero(cls, varset: VarSet, laurent: bool = False) -> "SparsePoly":
        return cls._raw(varset, {}, laurent)

    @classmethod
    def const(cls, varset: VarSet, value, laurent: bool = False) -> "SparsePoly":
        value = Fraction(value)
        if not value:
            return cls.zero(varset, laurent)
        return cls._raw(varset, {(0,) * len(varset): value}, laurent)

    @classmethod
    def variable(cls, varset: VarSet, name: str, laurent: bool = False) -> "SparsePoly":
        exps = [0] * len(varset)
        exps[varset.index(name)] = 1
        return cls._raw(varset, {tuple(exps): Fraction(1)}, laurent)

    # -- ring structure ----------------------------------------------------

    def _check_ring(self, other: "SparsePoly") -> None:
        if self.varset != other.varset:
            raise ContractViolation(
                f"variable sets differ: {self.varset.names} vs {other.varset.names}")

    def _coerce(self, other) -> "SparsePoly | None":
        if isinstance(other, SparsePoly):
            self._check_ring(other)
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.const(self.varset, other, self.laurent)
        return None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.const(self.varset, other, self.laurent)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.varset == other.varset and self.terms == other.terms

    def __hash__(self):
        return hash((self.varset, frozenset(self.terms.items())))

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps)
            if acc is None:
                out[exps] = coeff
            else:
                acc = acc + coeff
                if acc:
                    out[exps] = acc
                else:
                    del out[exps]
        return SparsePoly._raw(self.varset, out, self.laurent or other.laurent)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw(self.varset,
                               {e: -c for e, c in self.terms.items()},
                               self.laurent)

    def __sub__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SparsePoly":
        return (-self) + other

    def mul(self, other: "SparsePoly",
            prune: Callable[[Monomial], bool] | None = None) -> "SparsePoly":
        """Exact product; monomials for which ``prune`` returns True are dropped."""
        self._check_ring(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Monomial, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if prune is not None and prune(e):
                    continue
                acc = out.get(e)
                if acc is None:
                    out[e] = ca * cb
                else:
                    acc = acc + ca * cb
                    if acc:
                        out[e] = acc
                    else:
                        del out[e]
        return SparsePoly._raw(self.varset, out, self.laurent or other.laurent)

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return SparsePoly.zero(self.varset, self.laurent)
            return SparsePoly._raw(self.varset,
                                   {e: c * other for e, c in self.terms.items()},
                                   self.laurent)
        if isinstance(other, SparsePoly):
            return self.mul(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "SparsePoly":
        if not isinstance(e, int) or e < 0:
            raise ContractViolation("exponent must be a nonnegative integer")
        result = SparsePoly.const(self.varset, 1, self.laurent)
        base = self
        while e:
            if e & 1:
                result = result.mul(base)
            e >>= 1
            if e:
                base = base.mul(base)
        return result

    # -- degrees -----------------------------------------------------------

    def weighted_degree(self) -> int | None:
        """Max weighted degree over monomials, or None for the zero polynomial."""
        if not self.terms:
            return None
        w = self.varset.weights
        return max(sum(e * wt for e, wt in zip(exps, w)) for exps in self.terms)

    def homogeneous_degree(self) -> int | None:
        """The common weighted degree if homogeneous, else None.  Zero -> 0."""
        if not self.terms:
            return 0
        w = self.varset.weights
        degrees = {sum(e * wt for e, wt in zip(exps, w)) for exps in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def coefficient(self, exps: Monomial) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def __repr__(self) -> str:
        return f"SparsePoly({poly_to_text(self)!r})"


# -- operations on polynomials ---------------------------------------------


def coefficient_of(p: SparsePoly, selector: Mapping[str, int]) -> SparsePoly:
    """Coefficient of an exact monomial in a chosen subset of variables.

    ``selector`` maps variable names to the required (nonnegative) exponents;
    selected variables not listed are required to have exponent zero is NOT
    implied -- only the listed variables are constrained exactly, and they are
    removed from the result, which lives on the remaining variables.
    """
    picked: dict[int, int] = {}
    for name, want in selector.items():
        if want < 0:
            raise ContractViolation("selector exponents must be nonnegative")
        picked[p.varset.index(name)] = want
    keep = [i for i in range(len(p.varset)) if i not in picked]
    target = VarSet(tuple(p.varset.names[i] for i in keep),
                    tuple(p.varset.weights[i] for i in keep))
    out: dict[Monomial, Fraction] = {}
    for exps, coeff in p.terms.items():
        if all(exps[i] == want for i, want in picked.items()):
            out[tuple(exps[i] for i in keep)] = coeff
    return SparsePoly._raw(target, out, p.laurent)


def substitute(p: SparsePoly,
               bindings: Mapping[str, "SparsePoly | Fraction | int"]) -> SparsePoly:
    """Simultaneous exact substitution; a ring homomorphism.

    Bound variables are replaced by the given values; every poly value must
    live on one common target variable set.  Unbound variables pass through
    and must exist (same name) in the target set.
    """
    poly_bindings = {k: v for k, v in bindings.items() if isinstance(v, SparsePoly)}
    target: VarSet | None = None
    laurent = p.laurent
    for v in poly_bindings.values():
        if target is None:
            target = v.varset
        elif target != v.varset:
            raise ContractViolation("binding targets disagree")
        laurent = laurent or v.laurent
    bound = set(bindings)
    if target is None:
        keep = [i for i, n in enumerate(p.varset.names) if n not in bound]
        target = VarSet(tuple(p.varset.names[i] for i in keep),
                        tuple(p.varset.weights[i] for i in keep))
    values: dict[str, SparsePoly] = {}
    for name, v in bindings.items():
        p.varset.index(name)  # must belong to p
        if not isinstance(v, SparsePoly):
            v = SparsePoly.const(target, v, laurent)
        values[name] = v
    passthrough: dict[int, int] = {}
    for i, name in enumerate(p.varset.names):
        if name not in bound:
            passthrough[i] = target.index(name)

    power_cache: dict[tuple[str, int], SparsePoly] = {}

    def bound_power(name: str, e: int) -> SparsePoly:
        if e < 0:
            raise ContractViolation(
                f"cannot substitute into negative power of {name}")
        got = power_cache.get((name, e))
        if got is None:
            got = values[name] ** e
            power_cache[(name, e)] = got
        return got

    result = SparsePoly.zero(target, laurent)
    for exps, coeff in p.terms.items():
        mono = [0] * len(target)
        factor = SparsePoly.const(target, coeff, laurent)
        for i, e in enumerate(exps):
            if e == 0:
                continue
            j = passthrough.get(i)
            if j is not None:
                mono[j] = e
            else:
                factor = factor.mul(bound_power(p.varset.names[i], e))
        result = result + factor.mul(
            SparsePoly._raw(target, {tuple(mono): Fraction(1)}, laurent))
    return result


def vandermonde(varset: VarSet) -> SparsePoly:
    """The product of (v_i - v_j) over all pairs i < j of the variable set."""
    out = SparsePoly.const(varset, 1)
    n = len(varset)
    for i in range(n):
        vi = SparsePoly.variable(varset, varset.names[i])
        for j in range(i + 1, n):
            vj = SparsePoly.variable(varset, varset.names[j])
            out = out.mul(vi - vj)
    return out


def elementary_symmetric(varset: VarSet, j: int) -> SparsePoly:
    """The j-th elementary symmetric polynomial of all the variables."""
    n = len(varset)
    if j < 0 or j > n:
        return SparsePoly.zero(varset)
    out: dict[Monomial, Fraction] = {}
    for subset in combinations(range(n), j):
        exps = [0] * n
        for i in subset:
            exps[i] = 1
        out[tuple(exps)] = Fraction(1)
    return SparsePoly._raw(varset, out, False)


def permute_vars(p: SparsePoly, perm: tuple[int, ...]) -> SparsePoly:
    """Relabel variables: position i is sent to position perm[i]."""
    out: dict[Monomial, Fraction] = {}
    n = len(p.varset)
    for exps, coeff in p.terms.items():
        new = [0] * n
        for i, e in enumerate(exps):
            new[perm[i]] = e
        out[tuple(new)] = coeff
    return SparsePoly._raw(p.varset, out, p.laurent)


def embed(p: SparsePoly, target: VarSet, laurent: bool | None = None) -> SparsePoly:
    """Reinterpret p on a larger variable set (matched by name)."""
    positions = [target.index(name) for name in p.varset.names]
    out: dict[Monomial, Fraction] = {}
    for exps, coeff in p.terms.items():
        new = [0] * len(target)
        for pos, e in zip(positions, exps):
            new[pos] = e
        out[tuple(new)] = coeff
    return SparsePoly._raw(target, out, p.laurent if laurent is None else laurent)


def monomials_of_weighted_degree(varset: VarSet, k: int) -> Iterator[Monomial]:
    """All nonnegative-exponent monomials of weighted degree exactly k.

    Requires strictly positive weights (otherwise the set is infinite).
    """
    if any(w <= 0 for w in varset.weights):
        raise ContractViolation("enumeration needs strictly positive weights")

    def rec(i: int, remaining: int, prefix: tuple[int, ...]) -> Iterator[Monomial]:
        if i == len(varset):
            if remaining == 0:
                yield prefix
            return
        w = varset.weights[i]
        for e in range(remaining // w, -1, -1):
            yield from rec(i + 1, remaining - e * w, prefix + (e,))

    yield from rec(0, k, ())


# -- text grammar ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<var>[A-Za-z]+\d*)|(?P<op>[\^*+-]))")


def _term_sort_key(varset: VarSet):
    weights = varset.weights

    def key(exps: Monomial):
        deg = sum(e * w for e, w in zip(exps, weights))
        return (-deg, tuple(-e for e in exps))

    return key


def sorted_terms(p: SparsePoly) -> list[tuple[Monomial, Fraction]]:
    """Terms in canonical order: graded lexicographic, highest first."""
    key = _term_sort_key(p.varset)
    return [(e, p.terms[e]) for e in sorted(p.terms, key=key)]


def poly_to_text(p: SparsePoly) -> str:
    """Canonical text form, e.g. ``4*c1^3 - 3*c1*c2 - c3``."""
    if not p.terms:
        return "0"
    pieces: list[str] = []
    for exps, coeff in sorted_terms(p):
        factors = []
        for name, e in zip(p.varset.names, exps):
            if e == 0:
                continue
            factors.append(name if e == 1 else f"{name}^{e}")
        mag = abs(coeff)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


def parse_poly(text: str, varset: VarSet, laurent: bool = False) -> SparsePoly:
    """Parse the text grammar produced by :func:`poly_to_text`.

    Terms are joined by ``+``/``-``; a term is an optional integer or
    fraction coefficient and ``*``-separated powers like ``c1^3``, ``s2``
    or ``t4^-2``.  Whitespace is insignificant.
    """
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ContractViolation(f"cannot tokenize {text[pos:]!r}")
            break
        pos = m.end()
        for kind in ("num", "var", "op"):
            val = m.group(kind)
            if val is not None:
                tokens.append((kind, val.replace(" ", "")))
                break
    terms: dict[Monomial, Fraction] = {}
    i = 0
    n = len(tokens)

    def fail(msg: str):
        raise ContractViolation(f"parse error: {msg} in {text!r}")

    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            fail("dangling sign")
        coeff = Fraction(sign)
        exps = [0] * len(varset)
        expect_factor = True
        while i < n:
            kind, val = tokens[i]
            if expect_factor:
                if kind == "num":
                    coeff *= Fraction(val)
                elif kind == "var":
                    j = varset.index(val)
                    power = 1
                    if i + 1 < n and tokens[i + 1] == ("op", "^"):
                        i += 1
                        esign = 1
                        if i + 1 < n and tokens[i + 1] == ("op", "-"):
                            esign = -1
                            i += 1
                        if i + 1 >= n or tokens[i + 1][0] != "num":
                            fail("missing exponent")
                        i += 1
                        power = esign * int(tokens[i][1])
                    exps[j] += power
                else:
                    fail(f"unexpected {val!r}")
                i += 1
                expect_factor = False
            else:
                if kind == "op" and val == "*":
                    i += 1
                    expect_factor = True
                    continue
                break
        if not laurent and any(e < 0 for e in exps):
            raise ContractViolation("negative exponent on a non-Laurent ring")
        key = tuple(exps)
        acc = terms.get(key, Fraction(0)) + coeff
        if acc:
            terms[key] = acc
        elif key in terms:
            del terms[key]
    return SparsePoly._raw(varset, terms, laurent)
