"""Truncated homological Singer construction over a comodule-algebra model.

A class here is written in Singer coordinates u^i t^r (x) alpha with alpha a
monomial of the underlying model, total degree |alpha| - i - 2r.  Its image
on the collapsed page of the corresponding Tate spectral sequence (the
"preferred representative") is u^i t^{r + (p-1)|alpha|/2} (x) alpha^{(x)p},
carrying the sign (-1)^{|alpha|/2} when |alpha| is even and an opaque unit
in F_p when alpha is an odd-degree generator; the class therefore sits in
tower filtration -(i + 2r) - (p-1)|alpha|.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ConfigError,
    TruncationError,
    UnsupportedCaseError,
    VerificationFailure,
)
from .fpcore import (
    Element,
    MONO_ONE,
    check_budget,
    mono_degree,
    mono_sort_key,
    mono_to_str,
    monomials_up_to_degree,
)


class Unit:
    """A known scalar in F_p^x times a product of opaque unit symbols."""

    __slots__ = ("p", "scalar", "syms")

    def __init__(self, p, scalar=1, syms=()):
        scalar %= p
        if scalar == 0:
            raise ConfigError("a unit cannot have scalar 0")
        self.p = p
        self.scalar = scalar
        merged = {}
        for name, e in syms:
            merged[name] = merged.get(name, 0) + e
        self.syms = tuple(sorted((n, e) for n, e in merged.items() if e))

    def __mul__(self, other):
        if isinstance(other, int):
            return Unit(self.p, self.scalar * other, self.syms)
        return Unit(self.p, self.scalar * other.scalar, self.syms + other.syms)

    def inverse(self):
        inv = pow(self.scalar, self.p - 2, self.p)
        return Unit(self.p, inv, tuple((n, -e) for n, e in self.syms))

    def is_plain(self):
        return not self.syms

    def __eq__(self, other):
        return (
            isinstance(other, Unit)
            and self.p == other.p
            and self.scalar == other.scalar
            and self.syms == other.syms
        )

    def __hash__(self):
        return hash((self.scalar, self.syms))

    def __repr__(self):
        if not self.syms:
            return f"{self.scalar}"
        tail = "*".join(n if e == 1 else f"{n}^{e}" for n, e in self.syms)
        return f"{self.scalar}*{tail}" if self.scalar != 1 else tail


@dataclass(frozen=True)
class PageTerm:
    """Leading representative u^i t^rho (x) mono^{(x)p} with its coefficient."""

    unit: Unit
    i: int
    rho: int
    mono: tuple

    @property
    def filtration(self):
        return -(self.i + 2 * self.rho)


class SingerElement:
    """F_p-linear combination of Singer-coordinate classes u^i t^r (x) mono."""

    __slots__ = ("model", "terms")

    def __init__(self, model, terms=None):
        self.model = model
        p = model.p
        clean = {}
        for key, c in (terms or {}).items():
            i, r, mono = key
            if i not in (0, 1):
                raise ConfigError("the exterior part of a Singer class has i in {0, 1}")
            c %= p
            if c:
                clean[key] = c
        self.terms = clean

    @classmethod
    def zero(cls, model):
        return cls(model)

    @classmethod
    def of(cls, model, i, r, mono, coeff=1):
        return cls(model, {(i, r, mono): coeff})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, SingerElement)
            and self.model is other.model
            and self.terms == other.terms
        )

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return SingerElement(self.model, terms)

    def __sub__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) - c
        return SingerElement(self.model, terms)

    def scaled(self, c):
        return SingerElement(self.model, {k: c * v for k, v in self.terms.items()})

    def t_multiple(self, k):
        """Module action of t^k over the Tate coefficient ring."""
        return SingerElement(
            self.model, {(i, r + k, mono): c for (i, r, mono), c in self.terms.items()}
        )

    def alpha_multiple(self, elt):
        """Multiply the model slot by a class with trivial coaction."""
        terms = {}
        for (i, r, mono), c in self.terms.items():
            prod = Element.from_mono(self.model.table, mono) * elt
            for m2, c2 in prod.terms.items():
                key = (i, r, m2)
                terms[key] = terms.get(key, 0) + c * c2
        return SingerElement(self.model, terms)

    def degrees(self):
        t = self.model.table
        return {mono_degree(m, t) - i - 2 * r for (i, r, m) in self.terms}

    def degree(self):
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ConfigError(f"inhomogeneous Singer element: degrees {sorted(degs)}")
        return degs.pop()

    def sorted_terms(self):
        t = self.model.table
        return sorted(
            self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1], mono_sort_key(kv[0][2], t))
        )

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, r, mono), c in self.sorted_terms():
            ut = []
            if i:
                ut.append("u")
            if r:
                ut.append(f"t^{r}" if r != 1 else "t")
            coeff = "" if c == 1 else f"{c}*"
            left = "*".join(ut) if ut else "1"
            parts.append(f"{coeff}{left} (x) {mono_to_str(mono, self.model.table)}")
        return " + ".join(parts)

    def to_json(self):
        out = []
        for (i, r, mono), c in self.sorted_terms():
            out.append(
                {
                    "coeff": int(c),
                    "i": int(i),
                    "r": int(r),
                    "alpha": {
                        self.model.table.name_at(p): int(e) for p, e in mono
                    },
                }
            )
        return out

    def __repr__(self):
        return f"<Singer {self.to_str()}>"


def tower_filtration(model, i, r, mono):
    """Tate-tower filtration of the Singer class via its preferred representative."""
    return -(i + 2 * r) - (model.p - 1) * mono_degree(mono, model.table)


def epsilon_star(model, elt):
    """The natural map into the Singer construction.

    On an even homogeneous class this is sum_r t^{-(p-1)r} (x) (-1)^r SP^r;
    an odd comodule-primitive generator goes to 1 (x) itself; any other odd
    input is out of scope because its coefficients are not computed here.
    """
    t = model.table
    if isinstance(elt, str):
        elt = Element.gen(t, elt)
    if isinstance(elt, tuple):
        elt = Element.from_mono(t, elt)
    deg = elt.degree()
    if deg is None:
        return SingerElement.zero(model)
    p = model.p
    if deg % 2:
        if len(elt.terms) == 1:
            ((mono, c),) = elt.terms.items()
            if len(mono) == 1 and mono[0][1] == 1:
                name = t.name_at(mono[0][0])
                if model.is_primitive(name):
                    return SingerElement.of(model, 0, 0, mono, c)
        raise UnsupportedCaseError(
            "epsilon on odd-degree classes is only available for comodule-primitive generators"
        )
    out = SingerElement.zero(model)
    r = 0
    while 2 * r * (p - 1) <= deg:
        img = model.sp_lower(r, elt)
        if not img.is_zero():
            for mono, c in img.terms.items():
                out = out + SingerElement.of(
                    model, 0, -(p - 1) * r, mono, ((-1) ** r) * c
                )
        r += 1
    return out


def epsilon_leading_term_check(model, elt):
    """epsilon(x) = 1 (x) x plus terms with strictly negative t-exponent."""
    eps = epsilon_star(model, elt)
    lead = SingerElement(
        model, {(0, 0, mono): c for mono, c in elt.terms.items()}
    )
    rest = eps - lead
    return all(r < 0 for (i, r, mono) in rest.terms)


def conjugate_stage_name(model, k):
    """Name of the stage-k conjugate generator in this model (xi{k} or m{p^k-1})."""
    p = model.p
    for cand in (f"xi{k}", f"m{p**k - 1}"):
        if cand in model.table:
            return cand
    raise TruncationError(f"no stage-{k} conjugate generator in model {model.name}")


def epsilon_correction_identity(model, k):
    """Exact check of eps(xi-bar_k) = 1 (x) xi-bar_k + t^{-(p-1)} eps(xi-bar_{k-1}^p)."""
    p = model.p
    t = model.table
    gen_name = conjugate_stage_name(model, k)
    lhs = epsilon_star(model, Element.gen(t, gen_name))
    if k == 1:
        prev = Element.unit(t)
    else:
        prev = Element.gen(t, conjugate_stage_name(model, k - 1), p)
    gen_mono = next(iter(Element.gen(t, gen_name).terms))
    rhs = SingerElement.of(model, 0, 0, gen_mono)
    rhs = rhs + epsilon_star(model, prev).t_multiple(-(p - 1))
    if lhs != rhs:
        raise VerificationFailure(
            f"correction identity fails at k = {k}: lhs {lhs.to_str()} rhs {rhs.to_str()}"
        )
    return True


def tate_representative(model, i, r, mono):
    """Preferred collapsed-page representative of u^i t^r (x) mono.

    Even mono: exact coefficient (-1)^{deg/2}.  Odd generator: opaque unit.
    Other odd monomials are not pinned down and raise.
    """
    p = model.p
    deg = mono_degree(mono, model.table)
    shift = (p - 1) * deg // 2
    if deg % 2 == 0:
        sign = (-1) ** (deg // 2)
        return PageTerm(Unit(p, sign), i, r + shift, mono)
    if len(mono) == 1 and mono[0][1] == 1:
        name = model.table.name_at(mono[0][0])
        return PageTerm(Unit(p, 1, ((f"c[{name}]", 1),)), i, r + shift, mono)
    raise UnsupportedCaseError(
        "the representative coefficient of a non-generator odd class is not determined here"
    )


@dataclass(frozen=True)
class Window:
    """Total-degree range and filtration floor for truncated enumeration."""

    d_min: int
    d_max: int
    s_min: int
    s_max: int = 10**9

    def __post_init__(self):
        if self.d_min > self.d_max or self.s_min > self.s_max:
            raise ConfigError("empty window")


def singer_basis(model, window):
    """All Singer classes (i, r, mono) in the window, tower filtration >= s_min."""
    t = model.table
    # tower filtration >= s_min and total degree <= d_max bound the model degree:
    # deg - i - 2r = d and -(i+2r) >= s_min + (p-1) deg give deg <= (d_max - s_min)/p
    p = model.p
    max_alpha_deg = max(0, (window.d_max - window.s_min)) // p
    out = []
    count = 0
    for deg, monos in monomials_up_to_degree(t, max_alpha_deg).items():
        for mono in monos:
            for d in range(window.d_min, window.d_max + 1):
                iplus2r = deg - d
                i = iplus2r % 2
                r = (iplus2r - i) // 2
                filt = tower_filtration(model, i, r, mono)
                if window.s_min <= filt <= window.s_max:
                    out.append((i, r, mono))
                    count += 1
    check_budget(count, what="Singer basis")
    out.sort(key=lambda k: (k[0], k[1], mono_sort_key(k[2], t)))
    return out


class FiltrationQuotient:
    """Classes of tower filtration >= n inside a total-degree window."""

    def __init__(self, model, n, window):
        self.model = model
        self.n = n
        self.window = window
        eff = Window(window.d_min, window.d_max, max(n, window.s_min), window.s_max)
        self.basis = singer_basis(model, eff)
        self._index = {k: j for j, k in enumerate(self.basis)}

    def contains(self, key):
        return key in self._index

    def surjection_from(self, finer):
        """The structural surjection F^{n'} -> F^n for n' <= n, as a basis map."""
        if finer.n > self.n:
            raise ConfigError("surjections go from finer (smaller n) to coarser quotients")
        out = {}
        for key in finer.basis:
            out[key] = key if key in self._index else None
        return out


def check_tower_functoriality(model, window, floors):
    """Composites of structural surjections agree with the direct surjection."""
    floors = sorted(floors)
    quotients = {n: FiltrationQuotient(model, n, window) for n in floors}
    for a in range(len(floors)):
        for b in range(a + 1, len(floors)):
            for c in range(b + 1, len(floors)):
                na, nb, nc = floors[a], floors[b], floors[c]
                qa, qb, qc = quotients[na], quotients[nb], quotients[nc]
                ab = qb.surjection_from(qa)
                bc = qc.surjection_from(qb)
                ac = qc.surjection_from(qa)
                for key in qa.basis:
                    step = ab[key]
                    comp = None if step is None else bc[step]
                    if comp != ac[key]:
                        raise VerificationFailure(
                            f"tower functoriality fails at {key} through {na}->{nb}->{nc}"
                        )
    return True
