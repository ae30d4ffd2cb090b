"""Truncated Tate spectral sequence pages for the circle-equivariant
Hochschild-homology models.

A class u^i t^rho (x) x is stored as a single monomial over the model's
table extended by u (degree -1, exterior) and the invertible t (degree -2),
so products, signs, and total degrees come from the core algebra.  Its
bidegree is (s, w) = (-(i + 2 rho), |x|).

The second-page differential is the derivation with d(u) = d(t) = 0 and
d(x) = t * sigma(x) on vertical classes; on a basis class this is
(-1)^i u^i t^{rho+1} (x) sigma(x).  A homology cell is reported only when
both the incoming and outgoing differentials stay inside the filtration
window; edge rows are flagged undetermined instead of being reported as
cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ContractViolation, VerificationFailure
from .fpcore import (
    EVEN,
    ODD,
    Element,
    LinearMapMatrix,
    check_budget,
    mono_degree,
    mono_from_names,
    mono_sort_key,
    mono_to_str,
    monomials_of_degree,
    nullspace_mod_p,
    rank_mod_p,
    rref_mod_p,
)
from .singer import Window


def page_table_for(model):
    """The model's table extended by the Tate coefficient generators u, t.

    Cached on the model so page elements built anywhere share one table.
    """
    from .fpcore import GeneratorTable

    cached = getattr(model, "_page_table", None)
    if cached is not None:
        return cached
    entries = [("u", -1, ODD), ("t", -2, EVEN)] + [
        (g.name, g.degree, g.parity) for g in model.table.entries
    ]
    table = GeneratorTable(model.p, entries, laurent="t")
    model._page_table = table
    return table


def embed_vertical(page_table, model, mono):
    pairs = [(page_table.position(model.table.name_at(pos)), e) for pos, e in mono]
    return tuple(sorted(pairs))


def split_page_mono(page_table, mono):
    """(i, rho, vertical-part-pairs-by-name) of a page monomial."""
    i = rho = 0
    vertical = []
    for pos, e in mono:
        name = page_table.name_at(pos)
        if name == "u":
            i = e
        elif name == "t":
            rho = e
        else:
            vertical.append((name, e))
    return i, rho, tuple(vertical)


def page_mono(page_table, i, rho, vertical_pairs):
    pairs = []
    if i:
        pairs.append((page_table.position("u"), i))
    if rho:
        pairs.append((page_table.position("t"), rho))
    pairs.extend((page_table.position(n), e) for n, e in vertical_pairs)
    return tuple(sorted(pairs))


def filtration_of(page_table, mono):
    i, rho, _ = split_page_mono(page_table, mono)
    return -(i + 2 * rho)


@dataclass
class TatePage:
    number: int
    model: object
    window: Window
    page_table: object
    cells: dict = field(default_factory=dict)  # (s, w) -> list of page monomials
    d2: dict = field(default_factory=dict)  # (s, w) -> LinearMapMatrix, page 2 only
    homology: dict = field(default_factory=dict)  # (s, w) -> list of rep vectors
    homology_dims: dict = field(default_factory=dict)  # (s, w) -> int, rank arithmetic
    reps_monomial: dict = field(default_factory=dict)  # (s, w) -> page monomials or None
    undetermined_rows: set = field(default_factory=set)

    def dims(self):
        if self.number == 2:
            return {cell: len(basis) for cell, basis in self.cells.items()}
        return dict(self.homology_dims)


def vertical_basis(model, w):
    return monomials_of_degree(model.table, w)


def e2_page(model, window):
    """Basis {u^i t^rho (x) x} of the second page on the window."""
    if model.sigma is None:
        raise ConfigError("the Tate page needs a model with a suspension operator")
    pt = page_table_for(model)
    cells = {}
    count = 0
    for s in range(window.s_min, window.s_max + 1):
        i = s % 2
        rho = (-s - i) // 2
        w_max = window.d_max - s
        for w in range(max(0, window.d_min - s), w_max + 1):
            basis = vertical_basis(model, w)
            if not basis:
                continue
            monos = [page_mono(pt, i, rho, tuple((model.table.name_at(q), e) for q, e in m)) for m in basis]
            cells[(s, w)] = monos
            count += len(monos)
            check_budget(count, what="Tate page basis")
    page = TatePage(2, model, window, pt, cells=cells)
    _attach_d2(page)
    return page


def sigma_matrix(model, w):
    """Matrix of sigma from vertical degree w to w + 1 in the monomial bases."""
    dom = vertical_basis(model, w)
    cod = vertical_basis(model, w + 1)
    images = []
    for m in dom:
        img = model.sigma(Element.from_mono(model.table, m))
        images.append(dict(img.terms))
    return LinearMapMatrix.from_images(dom, cod, model.p, images)


def _attach_d2(page):
    model = page.model
    cache = {}
    for (s, w), basis in page.cells.items():
        if w not in cache:
            cache[w] = sigma_matrix(model, w)
        sig = cache[w]
        i = s % 2
        sign = -1 if i else 1
        mat = (sig.mat * sign) % model.p
        page.d2[(s, w)] = LinearMapMatrix(sig.domain, sig.codomain, model.p, mat)


def d2_element(model_or_page, elt):
    """The second differential of a page element: the derivation with
    d(u) = d(t) = 0 and d(x) = t sigma(x)."""
    model = getattr(model_or_page, "model", model_or_page)
    pt = page_table_for(model)
    out = Element.zero(pt)
    for mono, c in elt.terms.items():
        i, rho, vertical = split_page_mono(pt, mono)
        v_elt = Element(
            model.table,
            {tuple(sorted((model.table.position(n), e) for n, e in vertical)): 1},
        )
        sv = model.sigma(v_elt)
        if sv.is_zero():
            continue
        sign = -1 if i else 1
        for m2, c2 in sv.terms.items():
            target = page_mono(
                pt, i, rho + 1, tuple((model.table.name_at(q), e) for q, e in m2)
            )
            out = out + Element.from_mono(pt, target, sign * c * c2)
    return out


def check_d2_squares_to_zero(page, override=None):
    """d2 . d2 = 0 across the window; `override` substitutes matrices by
    vertical degree (used to prove the check catches corrupted entries)."""
    model = page.model
    ws = sorted({w for (_, w) in page.cells})
    mats = {}

    def mat(w):
        if override and w in override:
            return override[w]
        if w not in mats:
            mats[w] = sigma_matrix(model, w).mat
        return mats[w]

    for w in ws:
        comp = (mat(w + 1) @ mat(w)) % model.p
        if np.any(comp):
            raise ContractViolation(f"d2 composed with d2 is nonzero from vertical degree {w}")
    return True


def collapsed_vertical_monomials(model, w):
    """Monomials of P(g^p) (x) E(g^{p-1} s(g)) of degree w, as model monomials."""
    p = model.p
    gens = [g for g in model.table.entries if g.parity == EVEN]
    out = []

    def rec(idx, remaining, acc):
        if remaining == 0:
            pairs = []
            for g, (a, e) in acc.items():
                exp = p * a + (p - 1) * e
                if exp:
                    pairs.append((model.table.position(g), exp))
                if e:
                    pairs.append((model.table.position(f"s({g})"), 1))
            out.append(tuple(sorted(pairs)))
            return
        if idx == len(gens):
            return
        g = gens[idx]
        wp = p * g.degree
        we = p * g.degree + 1
        max_a = remaining // wp if wp else 0
        for e in (0, 1):
            base = e * we
            if base > remaining:
                continue
            a = 0
            while base + a * wp <= remaining:
                acc[g.name] = (a, e)
                rec(idx + 1, remaining - base - a * wp, acc)
                del acc[g.name]
                a += 1

    rec(0, w, {})
    return sorted(set(out), key=lambda m: mono_sort_key(m, model.table))


def _vertical_homology_data(model, w, sig, rank_of):
    """Shared per-vertical-degree homology data: (dim, rep vectors, rep monos,
    all_collapsed flag).  Representatives are taken from the collapsed
    alphabet when those monomials are cycles, independent modulo the image,
    and exactly span; otherwise a generic greedy basis is extracted."""
    p = model.p
    vert = vertical_basis(model, w)
    dim_w = len(vert)
    out_rank = rank_of(w)
    in_rank = rank_of(w - 1) if w >= 1 else 0
    dim_h = dim_w - out_rank - in_rank
    if dim_h < 0:
        raise ContractViolation(f"negative homology dimension at vertical degree {w}")
    in_mat = sig(w - 1).mat if w >= 1 else np.zeros((dim_w, 0), dtype=np.int64)
    out_mat = sig(w).mat

    index = {m: j for j, m in enumerate(vert)}
    cands = collapsed_vertical_monomials(model, w)
    cand_matrix = np.zeros((len(cands), dim_w), dtype=np.int64)
    for row, m in enumerate(cands):
        cand_matrix[row, index[m]] = 1
    cycles_ok = not np.any((out_mat @ cand_matrix.T) % p) if len(cands) else True
    if len(cands):
        stacked = np.vstack([in_mat.T % p, cand_matrix])
        independent = rank_mod_p(stacked, p) == in_rank + len(cands)
    else:
        independent = True
    if cycles_ok and independent and len(cands) == dim_h:
        reps = [cand_matrix[row] for row in range(len(cands))]
        return dim_h, reps, list(cands), True

    # generic fallback, viable for small cells
    cycles = nullspace_mod_p(out_mat, p)
    ech, piv = rref_mod_p(in_mat.T, p)
    ech = ech[: len(piv)]
    rank = len(piv)
    reps = []
    for vec in cycles:
        stacked = np.vstack([ech, vec.reshape(1, -1)])
        newech, newpiv = rref_mod_p(stacked, p)
        if len(newpiv) > rank:
            reps.append(vec)
            rank = len(newpiv)
            ech = newech[:rank]
    return dim_h, reps, [None] * len(reps), False


def e3_page(page2):
    """Homology of the second page.  Rows at the filtration window edges are
    marked undetermined: their incoming or outgoing differential leaves the
    window, so reporting them as cycles could fabricate homology.  The sign
    (-1)^i on the differential rescales basis vectors, so homology data is
    shared across the window's columns."""
    model = page2.model
    p = model.p
    w3 = page2.window
    page = TatePage(3, model, w3, page2.page_table)
    page.undetermined_rows = {w3.s_min, w3.s_min + 1, w3.s_max - 1, w3.s_max}
    sig_cache = {}
    rank_cache = {}
    data_cache = {}

    def sig(w):
        if w not in sig_cache:
            sig_cache[w] = sigma_matrix(model, w)
        return sig_cache[w]

    def rank_of(w):
        if w not in rank_cache:
            rank_cache[w] = rank_mod_p(sig(w).mat, p)
        return rank_cache[w]

    for (s, w), basis in sorted(page2.cells.items()):
        if s in page.undetermined_rows:
            continue
        if w not in data_cache:
            data_cache[w] = _vertical_homology_data(model, w, sig, rank_of)
        dim_h, reps, rep_monos, collapsed_ok = data_cache[w]
        page.homology_dims[(s, w)] = dim_h
        page.homology[(s, w)] = list(reps)
        i = s % 2
        rho = (-s - i) // 2
        page.reps_monomial[(s, w)] = [
            None
            if m is None
            else page_mono(
                page.page_table,
                i,
                rho,
                tuple((model.table.name_at(q), e) for q, e in m),
            )
            for m in rep_monos
        ]
    return page


def verify_collapse(page3):
    """Every third-page class must be a product of the declared infinite
    cycles u, t^{+-1}, g^p, g^{p-1} s(g) inside the window."""
    model = page3.model
    failures = []
    for (s, w), reps in sorted(page3.homology.items()):
        expected = collapsed_vertical_monomials(model, w)
        dim = page3.homology_dims.get((s, w), len(reps))
        if dim != len(expected) or len(reps) != dim:
            failures.append(
                (s, w, f"dimension {dim} ({len(reps)} reps) but {len(expected)} collapsed monomials")
            )
            continue
        names = page3.reps_monomial[(s, w)]
        if any(n is None for n in names):
            failures.append((s, w, "a homology class is not expressible in the collapsed alphabet"))
    if failures:
        raise VerificationFailure(
            "collapse check failed at "
            + "; ".join(f"(s={s}, w={w}): {msg}" for s, w, msg in failures)
        )
    return True


def check_t_periodicity(page):
    """Multiplication by t identifies columns s and s - 2 inside the window."""
    dims = page.dims()
    for (s, w), d in dims.items():
        if (s - 2, w) in dims:
            if dims[(s - 2, w)] != d:
                raise VerificationFailure(
                    f"t-periodicity fails between columns {s} and {s-2} at w = {w}"
                )
    return True


def d2_leibniz_check(page, samples, rng):
    """d2(xy) = d2(x) y + (-1)^{|x|} x d2(y) on random monomial pairs."""
    pt = page.page_table
    monos = [m for basis in page.cells.values() for m in basis]
    if not monos:
        return True
    for _ in range(samples):
        m1 = rng.choice(monos)
        m2 = rng.choice(monos)
        x = Element.from_mono(pt, m1)
        y = Element.from_mono(pt, m2)
        dx = mono_degree(m1, pt)
        lhs = d2_element(page, x * y)
        rhs = d2_element(page, x) * y + (x * d2_element(page, y)).scaled((-1) ** dx)
        if lhs != rhs:
            raise VerificationFailure(
                f"Leibniz fails for {mono_to_str(m1, pt)} and {mono_to_str(m2, pt)}"
            )
    return True


# -- the two comparison formula maps ---------------------------------------


def kappa_star(j, i, r, mono):
    """Leading terms of the comparison between the freely extended and the
    genuinely equivariant construction, on e_j (x) u^i t^r (x) alpha^{(x)p}.

    Straight swap for (i, j) in {(0,0), (1,0), (0,1)}; the remaining case
    expands by linearity to two terms, raising the filtration of the lead.
    Output terms are (coeff, i, r, j, alpha)."""
    if j not in (0, 1) or i not in (0, 1):
        raise ConfigError("cell indices i, j must be 0 or 1")
    if (i, j) != (1, 1):
        return [(1, i, r, j, mono)]
    return [(1, 1, r, 1, mono), (1, 0, r, 0, mono)]


def omega_t_star(thh_model, j, i, r, mono):
    """Leading term of the circle-extended power map on e_j (x) u^i t^r (x)
    alpha^{(x)p}, as an element of the Tate page of the Hochschild model.

    e_0 input: u^i t^r (x) alpha^p.  e_1 with i = 0: t^r times the wedge
    class alpha^{p-1} sigma(alpha).  e_1 with i = 1: by linearity,
    u t^r (x) wedge + t^r (x) alpha^p."""
    from .models import wedge_class

    pt = page_table_for(thh_model)
    base = thh_model.base
    if base is None:
        raise ConfigError("omega needs the Hochschild model over its base")
    deg = mono_degree(mono, base.table)
    if deg % 2:
        raise ConfigError("basis classes of the even-concentrated base are even")
    alpha_thh = Element(
        thh_model.table,
        {tuple(sorted((thh_model.table.position(base.table.name_at(q)), e) for q, e in mono)): 1},
    )
    p = thh_model.p

    def embed(vert_elt, ii, rr):
        out = Element.zero(pt)
        prefix = page_mono(pt, ii, rr, ())
        for m, c in vert_elt.terms.items():
            tgt = page_mono(pt, ii, rr, tuple((thh_model.table.name_at(q), e) for q, e in m))
            out = out + Element.from_mono(pt, tgt, c)
        return out

    power = alpha_thh**p
    if j == 0:
        return embed(power, i, r)
    wedge = wedge_class(thh_model, alpha_thh)
    if i == 0:
        return embed(wedge, 0, r)
    return embed(wedge, 1, r) + embed(power, 0, r)


def kappa_substitution_composite(thh_model, j, i, r, mono):
    """Apply kappa, then the two-cell substitution e_0 (x) x^{(x)p} -> x^p,
    e_1 (x) x^{(x)p} -> wedge(x); must agree with the direct formula."""
    from .models import wedge_class

    pt = page_table_for(thh_model)
    base = thh_model.base
    alpha_thh = Element(
        thh_model.table,
        {tuple(sorted((thh_model.table.position(base.table.name_at(q)), e) for q, e in mono)): 1},
    )
    p = thh_model.p
    out = Element.zero(pt)
    for coeff, ii, rr, jj, m in kappa_star(j, i, r, mono):
        vert = alpha_thh**p if jj == 0 else wedge_class(thh_model, alpha_thh)
        for mm, c in vert.terms.items():
            tgt = page_mono(pt, ii, rr, tuple((thh_model.table.name_at(q), e) for q, e in mm)
            )
            out = out + Element.from_mono(pt, tgt, coeff * c)
    return out
