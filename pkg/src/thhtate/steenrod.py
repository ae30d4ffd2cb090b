"""The mod-p dual Steenrod algebra on conjugate and Milnor generator alphabets.

Conjugate generators are named xi1, xi2, ... and tau0, tau1, ...; the Milnor
primitives carry an `m` prefix (mxi1, mtau0, ...).  The coproduct on the
conjugate alphabet is

    psi(xi_k)  = sum_{i+j=k} xi_i (x) xi_j^{p^i}          (xi_0 = 1)
    psi(tau_k) = 1 (x) tau_k + sum_{i+j=k} tau_i (x) xi_j^{p^i}

and the two alphabets are tied together by the recursion
0 = sum_{i+j=k} mxi_i^{p^j} * xi_j, solved once at construction time.
The dual Steenrod power action extracts the mxi1^r component of a coaction.
"""

from __future__ import annotations

from .errors import TruncationError, VerificationFailure
from .fpcore import (
    EVEN,
    ODD,
    Element,
    GeneratorTable,
    MONO_ONE,
    TensorElement,
    mono_degree,
    mono_from_names,
    validate_odd_prime,
)


def xi_degree(p, k):
    return 2 * p**k - 2


def tau_degree(p, k):
    return 2 * p**k - 1


class DualSteenrodAlgebra:
    """Finite-stage presentation of the dual Steenrod algebra at an odd prime."""

    def __init__(self, p, k_max):
        self.p = validate_odd_prime(p)
        self.k_max = k_max
        self.cutoff = tau_degree(p, k_max)  # largest tabled generator degree
        conj = []
        milnor = []
        for k in range(1, k_max + 1):
            conj.append((f"xi{k}", xi_degree(p, k), EVEN))
            milnor.append((f"mxi{k}", xi_degree(p, k), EVEN))
        for k in range(0, k_max + 1):
            conj.append((f"tau{k}", tau_degree(p, k), ODD))
            milnor.append((f"mtau{k}", tau_degree(p, k), ODD))
        self.conj_table = GeneratorTable(p, conj)
        self.milnor_table = GeneratorTable(p, milnor)
        self._xi_bar = {0: Element.unit(self.milnor_table)}
        self._tau_bar = {}
        self._build_conjugation_tables()
        self._milnor_cache = {}

    # -- conjugation ---------------------------------------------------

    def _build_conjugation_tables(self):
        p, mt = self.p, self.milnor_table
        for k in range(1, self.k_max + 1):
            acc = Element.zero(mt)
            for i in range(1, k + 1):
                xi_i = Element.gen(mt, f"mxi{i}", p ** (k - i))
                acc = acc + xi_i * self._xi_bar[k - i]
            self._xi_bar[k] = -acc
        for k in range(0, self.k_max + 1):
            acc = Element.gen(mt, f"mtau{k}")
            for i in range(1, k + 1):
                xi_i = Element.gen(mt, f"mxi{i}", p ** (k - i))
                acc = acc + xi_i * self._tau_bar[k - i]
            self._tau_bar[k] = -acc

    def conjugate_to_milnor(self, k):
        """xi-bar_k written in the Milnor monomial basis."""
        if k < 0 or k > self.k_max:
            raise TruncationError(f"xi{k} is outside the tabled range k <= {self.k_max}")
        return self._xi_bar[k]

    def conjugate_tau_to_milnor(self, k):
        if k < 0 or k > self.k_max:
            raise TruncationError(f"tau{k} is outside the tabled range k <= {self.k_max}")
        return self._tau_bar[k]

    def to_milnor(self, elt):
        """Rewrite an element of the conjugate alphabet in the Milnor alphabet."""
        mt = self.milnor_table
        if isinstance(elt, tuple):
            elt = Element.from_mono(self.conj_table, elt)
        out = Element.zero(mt)
        for mono, c in elt.terms.items():
            if mono in self._milnor_cache:
                out = out + self._milnor_cache[mono].scaled(c)
                continue
            acc = Element.unit(mt)
            for pos, e in mono:
                name = self.conj_table.name_at(pos)
                if name.startswith("xi"):
                    base = self._xi_bar[int(name[2:])]
                else:
                    base = self._tau_bar[int(name[3:])]
                acc = acc * base**e
            self._milnor_cache[mono] = acc
            out = out + acc.scaled(c)
        return out

    def check_conjugation_recursion(self, k):
        """The defining sum 0 = sum_{i+j=k} mxi_i^{p^j} xi-bar_j, evaluated exactly."""
        p, mt = self.p, self.milnor_table
        acc = Element.zero(mt)
        for i in range(0, k + 1):
            j = k - i
            xi_i = (
                Element.unit(mt) if i == 0 else Element.gen(mt, f"mxi{i}", p**j)
            )
            acc = acc + xi_i * self._xi_bar[j]
        return acc.is_zero()

    def reduce_mod_j0(self, milnor_elt):
        """Kill every monomial containing mxi_k (k >= 2) or mtau_k (k >= 1)."""
        mt = self.milnor_table
        keep = {}
        for mono, c in milnor_elt.terms.items():
            bad = False
            for pos, _ in mono:
                name = mt.name_at(pos)
                if name.startswith("mxi") and int(name[3:]) >= 2:
                    bad = True
                elif name.startswith("mtau") and int(name[4:]) >= 1:
                    bad = True
            if not bad:
                keep[mono] = c
        return Element(mt, keep)

    # -- coproducts ------------------------------------------------------

    def coproduct_gen(self, name):
        p, ct = self.p, self.conj_table
        terms = {}
        if name.startswith("xi"):
            k = int(name[2:])
            for i in range(0, k + 1):
                j = k - i
                left = MONO_ONE if i == 0 else mono_from_names(ct, {f"xi{i}": 1})
                right = MONO_ONE if j == 0 else mono_from_names(ct, {f"xi{j}": p**i})
                terms[(left, right)] = terms.get((left, right), 0) + 1
        elif name.startswith("tau"):
            k = int(name[3:])
            terms[(MONO_ONE, mono_from_names(ct, {f"tau{k}": 1}))] = 1
            for i in range(0, k + 1):
                j = k - i
                left = mono_from_names(ct, {f"tau{i}": 1})
                right = MONO_ONE if j == 0 else mono_from_names(ct, {f"xi{j}": p**i})
                terms[(left, right)] = terms.get((left, right), 0) + 1
        else:
            raise TruncationError(f"no coproduct formula for generator {name}")
        return TensorElement(ct, ct, terms)

    def coproduct(self, elt):
        """Multiplicative extension of the generator coproducts (conjugate alphabet)."""
        ct = self.conj_table
        if isinstance(elt, tuple):
            elt = Element.from_mono(ct, elt)
        for mono in elt.terms:
            if mono_degree(mono, ct) > self.cutoff:
                raise TruncationError(
                    f"degree {mono_degree(mono, ct)} exceeds the cutoff {self.cutoff}"
                )
        out = TensorElement.zero(ct, ct)
        for mono, c in elt.terms.items():
            acc = TensorElement.unit(ct, ct)
            for pos, e in mono:
                acc = acc * self.coproduct_gen(ct.name_at(pos)) ** e
            out = out + acc.scaled(c)
        return out

    def milnor_coproduct_gen(self, name):
        p, mt = self.p, self.milnor_table
        terms = {}
        if name.startswith("mxi"):
            k = int(name[3:])
            for i in range(0, k + 1):
                j = k - i
                left = MONO_ONE if i == 0 else mono_from_names(mt, {f"mxi{i}": p**j})
                right = MONO_ONE if j == 0 else mono_from_names(mt, {f"mxi{j}": 1})
                terms[(left, right)] = terms.get((left, right), 0) + 1
        else:
            k = int(name[4:])
            terms[(mono_from_names(mt, {f"mtau{k}": 1}), MONO_ONE)] = 1
            for i in range(0, k + 1):
                j = k - i
                left = MONO_ONE if i == 0 else mono_from_names(mt, {f"mxi{i}": p**j})
                right = mono_from_names(mt, {f"mtau{j}": 1})
                terms[(left, right)] = terms.get((left, right), 0) + 1
        return TensorElement(mt, mt, terms)

    def milnor_coproduct(self, elt):
        mt = self.milnor_table
        out = TensorElement.zero(mt, mt)
        for mono, c in elt.terms.items():
            acc = TensorElement.unit(mt, mt)
            for pos, e in mono:
                acc = acc * self.milnor_coproduct_gen(mt.name_at(pos)) ** e
            out = out + acc.scaled(c)
        return out

    def counit(self, elt):
        return elt.terms.get(MONO_ONE, 0)

    # -- dual Steenrod power action --------------------------------------

    def sp_lower(self, r, coaction):
        """Sum of right factors over terms mxi1^r (x) alpha'' of the coaction.

        The coaction's left factors may be in either alphabet; conjugate
        ones are converted first.  SP^0 is the identity.
        """
        if coaction.left_table is self.conj_table:
            coaction = coaction.map_left(self.to_milnor, self.milnor_table)
        target = (
            MONO_ONE if r == 0 else mono_from_names(self.milnor_table, {"mxi1": r})
        )
        out = Element.zero(coaction.right_table)
        for (left, right), c in coaction.terms.items():
            if left == target:
                out = out + Element.from_mono(coaction.right_table, right, c)
        return out

    def sp_on_conj(self, r, elt):
        """SP^r_* of an element of the conjugate alphabet (right factors conjugate)."""
        return self.sp_lower(r, self.coproduct(elt))

    def sp_on_conj_via_milnor(self, r, elt):
        """Second route: convert to the Milnor alphabet first, then use the
        Milnor coproduct.  Right factors come out in the Milnor alphabet."""
        return self.sp_lower(r, self.milnor_coproduct(self.to_milnor(elt)))

    # -- closed-form verifications ---------------------------------------

    def sp_closed_form_xibar(self, k, r):
        """SP^r(xi-bar_k) as the closed form predicts: (-1)^r xi-bar_{k-i}^{p^i}
        when r = (p^i - 1)/(p - 1) for some 0 <= i <= k, and zero otherwise."""
        p, ct = self.p, self.conj_table
        for i in range(0, k + 1):
            if r == (p**i - 1) // (p - 1):
                j = k - i
                if j == 0:
                    return Element.unit(ct, (-1) ** r)
                return Element.gen(ct, f"xi{j}", p**i, (-1) ** r)
        return Element.zero(ct)

    def sp_closed_form_xibar_pth(self, k, r):
        """SP^r(xi-bar_{k-1}^p) per the closed form: (-1)^r xi-bar_{k-1-i}^{p^{i+1}}
        when r = p(p^i - 1)/(p - 1), and zero otherwise."""
        p, ct = self.p, self.conj_table
        for i in range(0, k):
            if r == p * (p**i - 1) // (p - 1):
                j = k - 1 - i
                if j == 0:
                    return Element.unit(ct, (-1) ** r)
                return Element.gen(ct, f"xi{j}", p ** (i + 1), (-1) ** r)
        return Element.zero(ct)

    def _admissible_r(self, degree):
        return range(0, degree // (2 * (self.p - 1)) + 1)

    def verify_lemma_pronxi(self, k_max):
        """Check SP^r(xi-bar_k) against the closed form for every admissible (k, r)."""
        if k_max > self.k_max:
            raise TruncationError(f"k_max {k_max} beyond tabled range {self.k_max}")
        checked = []
        for k in range(1, k_max + 1):
            x = Element.gen(self.conj_table, f"xi{k}")
            for r in self._admissible_r(xi_degree(self.p, k)):
                got = self.sp_on_conj(r, x)
                want = self.sp_closed_form_xibar(k, r)
                if got != want:
                    raise VerificationFailure(
                        f"SP^{r}(xi{k}) = {got.to_str()} but the closed form gives {want.to_str()}"
                    )
                if not got.is_zero():
                    deg = got.degree()
                    if deg != xi_degree(self.p, k) - 2 * r * (self.p - 1):
                        raise VerificationFailure(f"SP^{r} did not lower degree at xi{k}")
                checked.append((k, r, not got.is_zero()))
        return checked

    def verify_lemma_pronxip(self, k_max):
        """Check SP^r(xi-bar_{k-1}^p) against the closed form for admissible (k, r)."""
        if k_max > self.k_max + 1:
            raise TruncationError(f"k_max {k_max} beyond tabled range {self.k_max}")
        p = self.p
        checked = []
        for k in range(1, k_max + 1):
            if k - 1 == 0:
                x = Element.unit(self.conj_table)
            else:
                x = Element.gen(self.conj_table, f"xi{k-1}", p)
            deg = p * xi_degree(p, k - 1)
            for r in self._admissible_r(deg) if deg else [0]:
                got = self.sp_on_conj(r, x)
                want = self.sp_closed_form_xibar_pth(k, r)
                if got != want:
                    raise VerificationFailure(
                        f"SP^{r}(xi{k-1}^p) = {got.to_str()} vs closed form {want.to_str()}"
                    )
                checked.append((k, r, not got.is_zero()))
        return checked

    # -- coassociativity ---------------------------------------------------

    def coassociativity_defect(self, elt):
        """Difference of (psi (x) id)psi and (id (x) psi)psi as a 3-tensor dict."""
        psi = self.coproduct(elt)
        left = {}
        for (a, x), c in psi.terms.items():
            for (a1, a2), c2 in self.coproduct(Element.from_mono(self.conj_table, a)).terms.items():
                key = (a1, a2, x)
                left[key] = (left.get(key, 0) + c * c2) % self.p
        right = {}
        for (a, x), c in psi.terms.items():
            for (x1, x2), c2 in self.coproduct(Element.from_mono(self.conj_table, x)).terms.items():
                key = (a, x1, x2)
                right[key] = (right.get(key, 0) + c * c2) % self.p
        defect = dict(left)
        for key, c in right.items():
            defect[key] = (defect.get(key, 0) - c) % self.p
        return {k: v for k, v in defect.items() if v % self.p}

    def counit_defect(self, elt):
        """Both counit composites must return the element itself."""
        psi = self.coproduct(elt)
        ct = self.conj_table
        left = Element.zero(ct)
        right = Element.zero(ct)
        for (a, x), c in psi.terms.items():
            if a == MONO_ONE:
                left = left + Element.from_mono(ct, x, c)
            if x == MONO_ONE:
                right = right + Element.from_mono(ct, a, c)
        return (left - elt), (right - elt)
