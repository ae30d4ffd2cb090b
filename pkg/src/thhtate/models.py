"""Comodule-algebra models for the homology of MU, BP, and their topological
Hochschild homology, with the degree +1 suspension derivation.

Generator names: the complex-cobordism model uses m1, m2, ...; the
Brown-Peterson model uses xi1, xi2, ...; adjoined suspension classes are
written s(m1), s(xi1), ....  Coaction values are tensors with left factors
in the conjugate dual-Steenrod alphabet and right factors in the model's
own alphabet.
"""

from __future__ import annotations

from .errors import ConfigError, HypothesisError
from .fpcore import (
    EVEN,
    ODD,
    Element,
    GeneratorTable,
    MONO_ONE,
    TensorElement,
    mono_from_names,
    monomials_of_degree,
    monomials_up_to_degree,
)
from .steenrod import DualSteenrodAlgebra


def is_pk_minus_one(p, ell):
    """Return k if ell = p^k - 1 for some k >= 1, else None."""
    k = 1
    while p**k - 1 <= ell:
        if p**k - 1 == ell:
            return k
        k += 1
    return None


class SuspensionOperator:
    """Degree +1 derivation sending each even generator to its adjoined
    suspension class and every suspension class to zero."""

    def __init__(self, table, gen_map):
        self.table = table
        self.gen_map = dict(gen_map)  # name -> name or None

    def on_gen(self, name):
        img = self.gen_map.get(name)
        if img is None:
            return Element.zero(self.table)
        return Element.gen(self.table, img)

    def __call__(self, elt):
        if isinstance(elt, tuple):
            elt = Element.from_mono(self.table, elt)
        t = self.table
        out = Element.zero(t)
        for mono, c in elt.terms.items():
            prefix_deg = 0
            for idx, (pos, e) in enumerate(mono):
                name = t.name_at(pos)
                img_name = self.gen_map.get(name)
                if img_name is not None:
                    # sigma hits factor i in place: prefix * g^{e-1} * sigma(g) * suffix
                    left_pairs = mono[:idx] + (((pos, e - 1),) if e > 1 else ())
                    right_pairs = mono[idx + 1 :]
                    sign = -1 if prefix_deg % 2 else 1
                    term = (
                        Element(t, {left_pairs: 1})
                        * Element.gen(t, img_name)
                        * Element(t, {right_pairs: 1})
                    )
                    out = out + term.scaled(sign * e * c)
                prefix_deg += e * t.degree_at(pos)
        return out


class ComoduleAlgebra:
    """Graded-commutative F_p algebra with a coaction given on generators."""

    def __init__(self, name, table, steenrod, coaction_on_gens, sigma=None, base=None):
        self.name = name
        self.table = table
        self.steenrod = steenrod
        self.p = steenrod.p
        self.coaction_on_gens = dict(coaction_on_gens)
        self.sigma = sigma
        self.base = base
        self._coaction_cache = {}
        for gen in table.entries:
            if gen.name not in self.coaction_on_gens:
                raise ConfigError(f"no coaction value for generator {gen.name}")
            val = self.coaction_on_gens[gen.name]
            degs = {
                self._tensor_term_degree(key) for key in val.terms
            }
            if degs and degs != {gen.degree}:
                raise ConfigError(f"coaction of {gen.name} is not degree-homogeneous")

    def _tensor_term_degree(self, key):
        left, right = key
        return sum(
            e * self.steenrod.conj_table.degree_at(pos) for pos, e in left
        ) + sum(e * self.table.degree_at(pos) for pos, e in right)

    def is_primitive(self, name):
        val = self.coaction_on_gens[name]
        want = TensorElement.of(
            Element.unit(self.steenrod.conj_table), Element.gen(self.table, name)
        )
        return val == want

    def coaction(self, elt):
        """Multiplicative extension of the generator coaction."""
        if isinstance(elt, tuple):
            elt = Element.from_mono(self.table, elt)
        ct = self.steenrod.conj_table
        out = TensorElement.zero(ct, self.table)
        for mono, c in elt.terms.items():
            if mono in self._coaction_cache:
                out = out + self._coaction_cache[mono].scaled(c)
                continue
            acc = TensorElement.unit(ct, self.table)
            for pos, e in mono:
                acc = acc * self.coaction_on_gens[self.table.name_at(pos)] ** e
            self._coaction_cache[mono] = acc
            out = out + acc.scaled(c)
        return out

    def sp_lower(self, r, elt):
        """Dual Steenrod power action through this model's coaction."""
        return self.steenrod.sp_lower(r, self.coaction(elt))

    def basis_of_degree(self, d):
        return monomials_of_degree(self.table, d)

    def basis_up_to(self, d):
        return monomials_up_to_degree(self.table, d)

    def even_generators(self):
        return [g for g in self.table.entries if g.parity == EVEN]


def build_h_mu(steenrod, ell_max):
    """Polynomial model on m_1 .. m_{ell_max}; m_{p^k-1} coacts by the
    conjugate coproduct, every other generator is a comodule primitive."""
    p = steenrod.p
    if ell_max < 1:
        raise ConfigError("ell_max must be at least 1")
    needed_k = 0
    for ell in range(1, ell_max + 1):
        k = is_pk_minus_one(p, ell)
        if k:
            needed_k = max(needed_k, k)
    if needed_k > steenrod.k_max:
        raise ConfigError(
            f"ell_max {ell_max} needs dual Steenrod generators up to k = {needed_k}"
        )
    table = GeneratorTable(p, [(f"m{ell}", 2 * ell, EVEN) for ell in range(1, ell_max + 1)])
    ct = steenrod.conj_table
    coactions = {}
    for ell in range(1, ell_max + 1):
        name = f"m{ell}"
        k = is_pk_minus_one(p, ell)
        if k is None:
            coactions[name] = TensorElement.of(Element.unit(ct), Element.gen(table, name))
        else:
            psi = steenrod.coproduct_gen(f"xi{k}")
            terms = {}
            for (left, right), c in psi.terms.items():
                # rewrite the right factor xi_j^{p^i} as m_{p^j-1}^{p^i}
                pairs = []
                for pos, e in right:
                    j = int(ct.name_at(pos)[2:])
                    pairs.append((table.position(f"m{p**j - 1}"), e))
                mono = tuple(sorted(pairs))
                terms[(left, mono)] = terms.get((left, mono), 0) + c
            coactions[name] = TensorElement(ct, table, terms)
    return ComoduleAlgebra("mu", table, steenrod, coactions)


def build_h_bp(steenrod, k_max):
    """Polynomial model on xi-bar_1 .. xi-bar_{k_max} with the coproduct coaction."""
    p = steenrod.p
    if k_max < 1:
        raise ConfigError("k_max must be at least 1")
    if k_max > steenrod.k_max:
        raise ConfigError(f"k_max {k_max} exceeds the dual Steenrod table {steenrod.k_max}")
    table = GeneratorTable(
        p, [(f"xi{k}", 2 * p**k - 2, EVEN) for k in range(1, k_max + 1)]
    )
    ct = steenrod.conj_table
    coactions = {}
    for k in range(1, k_max + 1):
        psi = steenrod.coproduct_gen(f"xi{k}")
        terms = {}
        for (left, right), c in psi.terms.items():
            pairs = [(table.position(ct.name_at(pos)), e) for pos, e in right]
            mono = tuple(sorted(pairs))
            terms[(left, mono)] = terms.get((left, mono), 0) + c
        coactions[f"xi{k}"] = TensorElement(ct, table, terms)
    return ComoduleAlgebra("bp", table, steenrod, coactions)


def build_h_thh(base):
    """Adjoin an exterior suspension class s(g) of degree |g| + 1 for every
    generator g of the base model; the new classes are comodule primitives."""
    steenrod = base.steenrod
    new_entries = [
        (f"s({g.name})", g.degree + 1, ODD) for g in base.table.entries
    ]
    table = base.table.extended(new_entries)
    ct = steenrod.conj_table
    coactions = {}
    for g in base.table.entries:
        old = base.coaction_on_gens[g.name]
        # same exponents, new table positions (same names)
        terms = {}
        for (left, right), c in old.terms.items():
            pairs = [(table.position(base.table.name_at(pos)), e) for pos, e in right]
            terms[(left, tuple(sorted(pairs)))] = c
        coactions[g.name] = TensorElement(ct, table, terms)
    for g in base.table.entries:
        sg = f"s({g.name})"
        coactions[sg] = TensorElement.of(Element.unit(ct), Element.gen(table, sg))
    gen_map = {g.name: f"s({g.name})" for g in base.table.entries}
    for g in base.table.entries:
        gen_map[f"s({g.name})"] = None
    sigma = SuspensionOperator(table, gen_map)
    return ComoduleAlgebra(
        f"thh-{base.name}", table, steenrod, coactions, sigma=sigma, base=base
    )


def conjugate_stage_of(model, gen_name):
    """Stage k when gen_name is the stage-k conjugate generator of this model
    (xi{k}, or m{p^k-1} in the cobordism alphabet); None otherwise."""
    p = model.p
    if gen_name.startswith("xi"):
        return int(gen_name[2:])
    if gen_name.startswith("m") and "(" not in gen_name:
        return is_pk_minus_one(p, int(gen_name[1:]))
    return None


def wedge_class(thh_model, alpha):
    """alpha^{p-1} * sigma(alpha) for an even class of an even-concentrated base."""
    if isinstance(alpha, str):
        alpha = Element.gen(thh_model.table, alpha)
    if isinstance(alpha, tuple):
        alpha = Element.from_mono(thh_model.table, alpha)
    deg = alpha.degree()
    if deg is None:
        return alpha
    if deg % 2:
        raise HypothesisError("the wedge construction needs an even-degree class")
    p = thh_model.p
    return alpha ** (p - 1) * thh_model.sigma(alpha)


def mu_to_bp_projection(mu_model, bp_model, elt):
    """Algebraic shadow of the MU -> BP comparison: kills m_ell for
    ell != p^k - 1 and matches m_{p^k-1} with xi-bar_k."""
    p = mu_model.p
    out = Element.zero(bp_model.table)
    mu_t, bp_t = mu_model.table, bp_model.table
    for mono, c in elt.terms.items():
        pairs = []
        dead = False
        for pos, e in mono:
            name = mu_t.name_at(pos)
            ell = int(name[1:]) if name.startswith("m") and "(" not in name else None
            if name.startswith("s(m"):
                ell = int(name[3:-1])
                k = is_pk_minus_one(p, ell)
                if k is None or f"s(xi{k})" not in bp_t:
                    dead = True
                    break
                pairs.append((bp_t.position(f"s(xi{k})"), e))
                continue
            k = is_pk_minus_one(p, ell)
            if k is None or f"xi{k}" not in bp_t:
                dead = True
                break
            pairs.append((bp_t.position(f"xi{k}"), e))
        if dead:
            continue
        out = out + Element(bp_t, {tuple(sorted(pairs)): c})
    return out
