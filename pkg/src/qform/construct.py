"""Constructive isomorphisms between metabolic forms.

Everything here returns explicit matrices that are re-validated on the
spot: metabolic normal bases, the isomorphism M ≅ -M fixing a
lagrangian, the doubling isomorphism M⊕M ≅ M⊕H, the stable isomorphism
between full geometric metabolic forms, and words in the lagrangian-
respecting unitary group (Keep/Flip generators) including the Wall-type
factorization of Φ ⊕ Φ⁻¹.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abelian import GroupHom, SubgroupRep, direct_complement, free_group, match_surjections
from .errors import HypothesisError, NoSolution, NotWellDefined
from .forms import (
    EQForm,
    FormIso,
    FormSum,
    form_direct_sum,
    hyperbolic,
    iso_direct_sum,
    negate,
    dual,
    subgroup_classify,
)
from .intmat import IntMatrix, Vec


# -- shared basis machinery -------------------------------------------


def _require_free_metabolic(e: EQForm, l: SubgroupRep, who: str):
    if not e.is_free():
        raise HypothesisError("not free", who)
    if not e.is_nonsingular():
        raise HypothesisError("not nonsingular", who)
    flags = subgroup_classify(e, l)
    if not flags.free_lagrangian:
        raise HypothesisError("not a lagrangian", who)


def _dual_basis(e: EQForm, l_basis: list[Vec], f_basis: list[Vec]) -> list[Vec]:
    """Basis e_i of <l_basis> with λ(e_i, f_j) = δ_ij.

    Exists (with a unimodular pairing matrix) whenever the span of
    l_basis is a lagrangian and f_basis spans a complement.
    """
    r = len(l_basis)
    p = IntMatrix.from_rows([[e.lam(li, fj) for fj in f_basis] for li in l_basis], r)
    try:
        pinv = p.inverse_unimodular()
    except NoSolution as exc:
        raise HypothesisError("dual basis", "pairing of lagrangian against complement is singular") from exc
    n = e.group.num_gens
    out = []
    for i in range(r):
        vec = [0] * n
        for s in range(r):
            c = pinv.entries[i][s]
            for t in range(n):
                vec[t] += c * l_basis[s][t]
        out.append(tuple(vec))
    return out


def _straighten_f_basis(e: EQForm, es: list[Vec], fs: list[Vec]) -> tuple[list[Vec], list[int]]:
    """The recursion producing f̄_i with λ(f̄_i, f̄_j) = δ_ij · d_i, d_i ∈ {0,1}.

    f̄_{i+1} = f_{i+1} - Σ_{j≤i} λ(f̄_j, f_{i+1}) e_j - ⌊λ(f_{i+1}, f_{i+1})/2⌋ e_{i+1}.
    The e_i are assumed dual to the f_i and isotropic, which makes each
    correction kill the off-diagonal pairings while preserving μ.
    """
    n = e.group.num_gens
    fbar: list[Vec] = []
    diag: list[int] = []
    for i, f in enumerate(fs):
        cur = list(f)
        for j, prev in enumerate(fbar):
            c = e.lam(prev, f)
            for t in range(n):
                cur[t] -= c * es[j][t]
        half = e.lam(f, f) // 2
        for t in range(n):
            cur[t] -= half * es[i][t]
        fbar.append(tuple(cur))
        diag.append(e.lam(f, f) % 2)
    return fbar, diag


@dataclass(frozen=True)
class MetabolicBasis:
    """A basis in which the pairing becomes [[0, I], [I, D]], D diagonal 0/1.

    ``basis`` has the new basis vectors as columns; the first half spans
    the given lagrangian.
    """

    form: EQForm
    lagrangian: SubgroupRep
    basis: IntMatrix
    diag: tuple[int, ...]

    def __post_init__(self):
        k = len(self.diag)
        b = self.basis
        if b.rows != 2 * k or b.cols != 2 * k:
            raise NotWellDefined("metabolic basis has wrong shape")
        if not b.is_unimodular():
            raise NotWellDefined("metabolic basis is not unimodular")
        expected = _block_form_matrix(k, self.diag)
        if b.transpose().mul(self.form.matrix).mul(b) != expected:
            raise NotWellDefined("metabolic basis does not normalize the pairing")
        span = SubgroupRep.from_elements(self.form.group, [b.column(i) for i in range(k)])
        if span != self.lagrangian:
            raise NotWellDefined("first half of metabolic basis does not span the lagrangian")


def _block_form_matrix(k: int, diag) -> IntMatrix:
    top = IntMatrix.zeros(k, k).hstack(IntMatrix.identity(k))
    bottom = IntMatrix.identity(k).hstack(IntMatrix.diagonal(list(diag)))
    return top.vstack(bottom)


def metabolic_basis(e: EQForm, l: SubgroupRep) -> MetabolicBasis:
    """Normal basis of a free metabolic form adapted to a lagrangian."""
    _require_free_metabolic(e, l, "metabolic basis")
    l_basis = l.generators()
    n_basis = direct_complement(l).generators()
    es = _dual_basis(e, l_basis, n_basis)
    fbar, diag = _straighten_f_basis(e, es, n_basis)
    cols = [list(v) for v in es] + [list(v) for v in fbar]
    basis = IntMatrix.from_columns(cols, rows=e.group.num_gens)
    return MetabolicBasis(e, l, basis, tuple(diag))


def is_hyperbolic_with_witness(e: EQForm, l: SubgroupRep) -> FormIso:
    """Isomorphism onto the standard hyperbolic form of the same rank.

    Requires the conditions that characterize hyperbolic forms: free,
    nonsingular with a lagrangian, even, and μ = 0.  The failing
    condition is named in the raised error.
    """
    if not e.is_free():
        raise HypothesisError("not free")
    if not e.mu.is_zero():
        raise HypothesisError("mu nonzero")
    if not e.is_even():
        raise HypothesisError("not even")
    mb = metabolic_basis(e, l)  # raises "not nonsingular" / "not a lagrangian"
    assert all(d == 0 for d in mb.diag)  # evenness forces D = 0
    k = len(mb.diag)
    target = hyperbolic(k, e.target, e.v)
    hom = GroupHom(e.group, target.group, mb.basis.inverse_unimodular())
    return FormIso(e, target, hom)


# -- the explicit isomorphisms ----------------------------------------


def neg_isomorphism(e: EQForm, l: SubgroupRep) -> FormIso:
    """J : M → -M with J fixing the lagrangian pointwise.

    In a metabolic basis: J(e_i) = e_i and J(f_i) = d_i e_i - f_i.
    """
    mb = metabolic_basis(e, l)
    k = len(mb.diag)
    top = IntMatrix.identity(k).hstack(IntMatrix.diagonal(list(mb.diag)))
    bottom = IntMatrix.zeros(k, k).hstack(IntMatrix.identity(k).neg())
    j_new = top.vstack(bottom)
    j = mb.basis.mul(j_new).mul(mb.basis.inverse_unimodular())
    return FormIso(e, negate(e), GroupHom(e.group, e.group, j))


def double_to_hyperbolic(e: EQForm, l: SubgroupRep) -> FormIso:
    """I : M ⊕ M → M ⊕ H with I(L ⊕ L) = L ⊕ ({0} × Z^k).

    Images in a metabolic basis (a_i, b_i the hyperbolic basis):
    e_i ↦ e_i + b_i, f_i ↦ f_i + d_i b_i, ē_i ↦ -b_i, f̄_i ↦ f_i - a_i.
    """
    mb = metabolic_basis(e, l)
    k = len(mb.diag)
    n = 2 * k
    source = form_direct_sum(e, e).form
    target = form_direct_sum(e, hyperbolic(k, e.target, e.v)).form

    def tvec(m_part: Vec | None, a: dict[int, int], b: dict[int, int]) -> list[int]:
        out = [0] * (2 * n)
        if m_part is not None:
            for t in range(n):
                out[t] = m_part[t]
        for i, c in a.items():
            out[n + i] = c
        for i, c in b.items():
            out[n + k + i] = c
        return out

    e_cols = [mb.basis.column(i) for i in range(k)]
    f_cols = [mb.basis.column(k + i) for i in range(k)]
    images = []
    for i in range(k):
        images.append(tvec(e_cols[i], {}, {i: 1}))
    for i in range(k):
        images.append(tvec(f_cols[i], {}, {i: mb.diag[i]}))
    for i in range(k):
        images.append(tvec(None, {}, {i: -1}))
    for i in range(k):
        images.append(tvec(f_cols[i], {i: -1}, {}))
    src_basis = IntMatrix.block_diagonal([mb.basis, mb.basis])
    hom = IntMatrix.from_columns(images, rows=2 * n).mul(src_basis.inverse_unimodular())
    return FormIso(source, target, GroupHom(source.group, target.group, hom))


@dataclass(frozen=True)
class DiagonalLagrangians:
    sum_form: EQForm
    diagonal: SubgroupRep
    star_sum_form: EQForm
    anti_diagonal: SubgroupRep


def diagonal_lagrangians(i: FormIso) -> DiagonalLagrangians:
    """Δ_I in M ⊕ (-N) and Δ*_I in M ⊕ (-N*) for an isomorphism I: M → N."""
    if not i.source.is_free() or not i.target.is_free():
        raise HypothesisError("not free", "diagonal lagrangians need free forms")
    plain = form_direct_sum(i.source, negate(i.target)).form
    starred = form_direct_sum(i.source, negate(dual(i.target))).form
    gens = i.source.group.gens()
    diag = SubgroupRep.from_elements(plain.group, [tuple(g) + i.apply(g) for g in gens])
    anti = SubgroupRep.from_elements(
        starred.group, [tuple(g) + tuple(-c for c in i.apply(g)) for g in gens]
    )
    return DiagonalLagrangians(plain, diag, starred, anti)


# -- stable isomorphism of full geometric metabolic forms -------------


@dataclass(frozen=True)
class StableLagrangianIso:
    """I : M ⊕ H_2k → M' ⊕ H_2l matching the stabilized lagrangians."""

    k: int
    l: int
    iso: FormIso
    source_lagrangian: SubgroupRep
    target_lagrangian: SubgroupRep


def _restrict_mu(e: EQForm, basis: list[Vec]) -> GroupHom:
    src = free_group(len(basis))
    if not basis:
        return GroupHom.zero(src, e.target)
    return GroupHom.from_gen_images(src, e.target, [e.mu.apply(b) for b in basis])


def stable_lagrangian_iso(
    e: EQForm,
    l: SubgroupRep,
    e2: EQForm,
    l2: SubgroupRep,
    mode: str = "stable",
) -> StableLagrangianIso:
    """Stable isomorphism between metabolic forms matching lagrangians.

    Both forms must be free, metabolic (witnessed by the supplied
    lagrangians), full, and geometric with respect to a shared parity
    map.  In strict mode (free coefficients, equal ranks) no
    stabilization happens and k = l = 0.
    """
    if e.target != e2.target:
        raise HypothesisError("different coefficient groups")
    if e.v is None or e.v != e2.v:
        raise HypothesisError("v missing" if e.v is None or e2.v is None else "different parity maps")
    for form, lagr in ((e, l), (e2, l2)):
        _require_free_metabolic(form, lagr, "stable isomorphism")
        if not form.is_full():
            raise HypothesisError("not full")
        if not form.is_geometric():
            raise HypothesisError("not geometric")

    n_basis = direct_complement(l).generators()
    n2_basis = direct_complement(l2).generators()
    f = _restrict_mu(e, n_basis)
    g = _restrict_mu(e2, n2_basis)
    matched = match_surjections(f, g, mode="strict" if mode == "strict" else "stable")
    k = matched.f_extra.free_rank
    kl = matched.g_extra.free_rank

    sum_s = form_direct_sum(e, hyperbolic(k, e.target, e.v))
    sum_t = form_direct_sum(e2, hyperbolic(kl, e.target, e.v))

    def stabilized(sumform: FormSum, base_rank: int, pairs: int, l_gens, n_gens):
        ia, ib = sumform.incl_a, sumform.incl_b
        a_vecs = [ib.apply(tuple(1 if t == j else 0 for t in range(2 * pairs))) for j in range(pairs)]
        b_vecs = [ib.apply(tuple(1 if t == pairs + j else 0 for t in range(2 * pairs))) for j in range(pairs)]
        ls = [ia.apply(v) for v in l_gens] + b_vecs
        fs = [ia.apply(v) for v in n_gens] + a_vecs
        return ls, fs

    ls, fs = stabilized(sum_s, e.rank, k, l.generators(), n_basis)
    ls2, fs2 = stabilized(sum_t, e2.rank, kl, l2.generators(), n2_basis)
    r = len(fs)
    if len(fs2) != r:
        raise NotWellDefined("matched complements have different ranks")

    # transport the source f-basis through the matching isomorphism
    h = matched.iso.matrix
    fs_prime = []
    for t in range(r):
        vec = [0] * sum_t.form.group.num_gens
        for s in range(r):
            c = h.entries[s][t]
            for q in range(len(vec)):
                vec[q] += c * fs2[s][q]
        fs_prime.append(tuple(vec))

    es = _dual_basis(sum_s.form, ls, fs)
    es2 = _dual_basis(sum_t.form, ls2, fs_prime)
    fbar, _ = _straighten_f_basis(sum_s.form, es, fs)
    fbar2, _ = _straighten_f_basis(sum_t.form, es2, fs_prime)

    bs = IntMatrix.from_columns([list(v) for v in es + fbar], rows=sum_s.form.group.num_gens)
    bt = IntMatrix.from_columns([list(v) for v in es2 + fbar2], rows=sum_t.form.group.num_gens)
    hom = bt.mul(bs.inverse_unimodular())
    iso = FormIso(sum_s.form, sum_t.form, GroupHom(sum_s.form.group, sum_t.form.group, hom))

    src_l = SubgroupRep.from_elements(sum_s.form.group, ls)
    tgt_l = SubgroupRep.from_elements(sum_t.form.group, ls2)
    if src_l.transport(iso.hom) != tgt_l:
        raise NotWellDefined("stable isomorphism does not match the lagrangians")
    return StableLagrangianIso(k, kl, iso, src_l, tgt_l)


# -- RU words ----------------------------------------------------------


@dataclass(frozen=True)
class Keep:
    """Generator: an automorphism preserving the reference lagrangian."""

    iso: FormIso

    def inverse(self) -> "Keep":
        return Keep(self.iso.inverse())


@dataclass(frozen=True)
class Flip:
    """Generator I⁻¹ ∘ (σ ⊕ id) ∘ I for a splitting I : M → H_2 ⊕ M'.

    ``witness`` is I; its target must carry the split form with the
    hyperbolic pair in the first two coordinates.  ``rest_lagrangian``
    is the lagrangian L' of M' with I(L) = ({0} × Z) ⊕ L'.
    """

    witness: FormIso
    rest_lagrangian: SubgroupRep

    def inverse(self) -> "Flip":
        return self  # a flip is an involution


@dataclass(frozen=True)
class RUWord:
    """A word in Keep/Flip generators over a fixed (form, lagrangian)."""

    form: EQForm
    lagrangian: SubgroupRep
    letters: tuple

    def inverse(self) -> "RUWord":
        return RUWord(self.form, self.lagrangian, tuple(g.inverse() for g in reversed(self.letters)))


def _split_rest_form(t: EQForm) -> EQForm:
    """The M' in a target form laid out as H_2 ⊕ M'."""
    n = t.group.num_gens
    rest = free_group(n - 2)
    rest_matrix = IntMatrix.from_rows([row[2:] for row in t.matrix.entries[2:]], n - 2)
    if n > 2:
        mu_matrix = IntMatrix.from_rows([row[2:] for row in t.mu.matrix.entries], n - 2)
    else:
        mu_matrix = IntMatrix.zeros(t.target.num_gens, 0)
    return EQForm(rest, rest_matrix, GroupHom(rest, t.target, mu_matrix), t.v)


def _realize_letter(form: EQForm, lagr: SubgroupRep, letter, index: int) -> FormIso:
    def bad(reason: str):
        raise HypothesisError(f"generator {index}: {reason}")

    if isinstance(letter, Keep):
        iso = letter.iso
        if iso.source != form or iso.target != form:
            bad("keep generator is not an automorphism of the ambient form")
        if lagr.transport(iso.hom) != lagr:
            bad("keep generator does not preserve the lagrangian")
        return iso
    if not isinstance(letter, Flip):
        bad("unknown generator kind")
    w = letter.witness
    if w.source != form:
        bad("flip witness does not start at the ambient form")
    t = w.target
    n = t.group.num_gens
    if not t.group.is_free or n < 2:
        bad("flip witness target is not a free form of rank at least 2")
    m = t.matrix.entries
    if m[0][0] != 0 or m[1][1] != 0 or m[0][1] != 1:
        bad("flip witness target does not start with a hyperbolic pair")
    if any(m[0][j] != 0 or m[1][j] != 0 for j in range(2, n)):
        bad("hyperbolic pair is not orthogonal to the rest")
    for i in (0, 1):
        if not t.target.is_zero_element(t.mu.apply(t.group.gen(i))):
            bad("mu does not vanish on the hyperbolic pair")
    rest_form = _split_rest_form(t)
    lp = letter.rest_lagrangian
    if lp.ambient != rest_form.group:
        bad("rest lagrangian lives in the wrong group")
    if not subgroup_classify(rest_form, lp).free_lagrangian:
        bad("rest lagrangian fails the lagrangian check")
    embedded = [t.group.gen(1)] + [(0, 0) + g for g in lp.generators()]
    if lagr.transport(w.hom) != SubgroupRep.from_elements(t.group, embedded):
        bad("witness does not carry the lagrangian onto ({0}×Z) ⊕ L'")
    perm = [1, 0] + list(range(2, n))
    sigma_matrix = IntMatrix.from_rows(
        [[1 if j == perm[i] else 0 for j in range(n)] for i in range(n)], n
    )
    sigma = FormIso(t, t, GroupHom(t.group, t.group, sigma_matrix))
    return w.inverse().compose(sigma).compose(w)


def ru_word_eval(word: RUWord) -> FormIso:
    """Validate every generator and return the ordered product.

    The first letter is applied last: eval([g1, ..., gn]) = g1 ∘ ... ∘ gn.
    """
    result = FormIso.identity(word.form)
    for idx, letter in enumerate(word.letters):
        result = result.compose(_realize_letter(word.form, word.lagrangian, letter, idx))
    return result


# -- the Wall-type factorization --------------------------------------


def _perm_form(t: EQForm, perm: list[int]) -> tuple[EQForm, IntMatrix]:
    """The form with coordinates permuted so that new slot i holds old perm[i]."""
    n = t.group.num_gens
    p = IntMatrix.from_rows([[1 if j == perm[i] else 0 for j in range(n)] for i in range(n)], n)
    lam = p.mul(t.matrix).mul(p.transpose())
    mu = GroupHom(t.group, t.target, t.mu.matrix.mul(p.transpose()))
    return EQForm(t.group, lam, mu, t.v), p


def _flip_letters_for_stabilization(base: EQForm, l: SubgroupRep, pairs: int, pre: FormIso) -> list[Flip]:
    """Flip letters realizing id ⊕ Σ on base ⊕ H_{2·pairs}, conjugated by ``pre``.

    ``pre`` maps the ambient of the word onto base ⊕ H; each letter's
    witness moves one hyperbolic pair (a_i, b_i) to the front.
    """
    sum_form = form_direct_sum(base, hyperbolic(pairs, base.target, base.v)).form
    n = base.group.num_gens
    letters = []
    l_gens = l.generators()
    for i in range(pairs):
        others_a = [n + j for j in range(pairs) if j != i]
        others_b = [n + pairs + j for j in range(pairs) if j != i]
        perm = [n + i, n + pairs + i] + list(range(n)) + others_a + others_b
        target, p = _perm_form(sum_form, perm)
        witness = FormIso(sum_form, target, GroupHom(sum_form.group, target.group, p)).compose(pre)
        rest_total = n + 2 * (pairs - 1)
        rest_gens = [g + (0,) * (2 * (pairs - 1)) for g in l_gens]
        for j in range(pairs - 1):
            rest_gens.append(tuple(1 if t == n + (pairs - 1) + j else 0 for t in range(rest_total)))
        rest_l = SubgroupRep.from_elements(free_group(rest_total), rest_gens)
        letters.append(Flip(witness, rest_l))
    return letters


def _embed_letter_after_first(first: EQForm, first_l: SubgroupRep, letter):
    """Turn a generator of RU(B, K) into one of RU(first ⊕ B, first_l ⊕ K)."""
    if isinstance(letter, Keep):
        return Keep(iso_direct_sum(FormIso.identity(first), letter.iso))
    w = letter.witness
    n = first.group.num_gens
    inner = iso_direct_sum(FormIso.identity(first), w)
    total = inner.target.group.num_gens
    # rotate (first, h2, rest) into (h2, first, rest)
    perm = [n, n + 1] + list(range(n)) + list(range(n + 2, total))
    target, p = _perm_form(inner.target, perm)
    witness = FormIso(inner.target, target, GroupHom(inner.target.group, target.group, p)).compose(inner)
    rest_total = total - 2
    rest_gens = [g + (0,) * (rest_total - n) for g in first_l.generators()]
    for g in letter.rest_lagrangian.generators():
        rest_gens.append((0,) * n + g)
    rest_l = SubgroupRep.from_elements(free_group(rest_total), rest_gens)
    return Flip(witness, rest_l)


@dataclass(frozen=True)
class RUWallWitness:
    """Ambient (M⊕M⊕(-M), L⊕L⊕L) and a word evaluating to Φ ⊕ Φ⁻¹ ⊕ id."""

    ambient: EQForm
    lagrangian: SubgroupRep
    word: RUWord
    expected: FormIso


def ru_wall_witness(e: EQForm, l: SubgroupRep, phi: FormIso) -> RUWallWitness:
    if phi.source != e or phi.target != e:
        raise HypothesisError("phi is not an automorphism of the form")
    if e.v is None:
        raise HypothesisError("v missing")
    if not e.is_geometric():
        raise HypothesisError("not geometric")
    mb = metabolic_basis(e, l)  # checks free, nonsingular, lagrangian
    s = len(mb.diag)
    n = 2 * s

    dbl = form_direct_sum(e, negate(e)).form
    th = form_direct_sum(e, hyperbolic(s, e.target, e.v)).form

    # the frame F : M ⊕ (-M) → M ⊕ H with
    # F(e_i) = -b_i, F(f_i) = f_i - a_i, F(ē_i) = e_i + b_i, F(f̄_i) = d_i e_i - f_i
    def tvec(m_part, a: dict[int, int], b: dict[int, int]) -> list[int]:
        out = [0] * (2 * n)
        if m_part is not None:
            for t in range(n):
                out[t] += m_part[t]
        for idx, c in a.items():
            out[n + idx] = c
        for idx, c in b.items():
            out[n + s + idx] = c
        return out

    e_cols = [mb.basis.column(i) for i in range(s)]
    f_cols = [mb.basis.column(s + i) for i in range(s)]
    images = []
    for i in range(s):
        images.append(tvec(None, {}, {i: -1}))
    for i in range(s):
        images.append(tvec(f_cols[i], {i: -1}, {}))
    for i in range(s):
        images.append(tvec(e_cols[i], {}, {i: 1}))
    for i in range(s):
        images.append(tvec([mb.diag[i] * x - y for x, y in zip(e_cols[i], f_cols[i])], {}, {}))
    src_basis = IntMatrix.block_diagonal([mb.basis, mb.basis])
    f_matrix = IntMatrix.from_columns(images, rows=2 * n).mul(src_basis.inverse_unimodular())
    frame = FormIso(dbl, th, GroupHom(dbl.group, th.group, f_matrix))

    w_letters = _flip_letters_for_stabilization(e, l, s, frame)
    w_iso = FormIso.identity(dbl)
    for letter in w_letters:
        w_iso = w_iso.compose(_realize_letter_unchecked(letter))
    phi_neg = FormIso(negate(e), negate(e), phi.hom)
    phi_phi = iso_direct_sum(phi, phi_neg)
    k_iso = w_iso.compose(phi_phi).compose(w_iso)
    pair_word = w_letters + [Keep(k_iso)] + w_letters

    ambient = form_direct_sum(e, dbl).form
    l3_gens = [g + (0,) * (2 * n) for g in l.generators()]
    l3_gens += [(0,) * n + g + (0,) * n for g in l.generators()]
    l3_gens += [(0,) * (2 * n) + g for g in l.generators()]
    l3 = SubgroupRep.from_elements(ambient.group, l3_gens)

    embedded = [_embed_letter_after_first(e, l, g) for g in pair_word]

    perm = list(range(n, 2 * n)) + list(range(n)) + list(range(2 * n, 3 * n))
    swap_matrix = IntMatrix.from_rows(
        [[1 if j == perm[i] else 0 for j in range(3 * n)] for i in range(3 * n)], 3 * n
    )
    tau = Keep(FormIso(ambient, ambient, GroupHom(ambient.group, ambient.group, swap_matrix)))

    letters = [tau] + embedded + [tau] + [g.inverse() for g in reversed(embedded)]
    word = RUWord(ambient, l3, tuple(letters))

    expected = iso_direct_sum(phi, iso_direct_sum(phi.inverse(), FormIso.identity(negate(e))))
    return RUWallWitness(ambient, l3, word, expected)


def _realize_letter_unchecked(letter) -> FormIso:
    """Product form of a letter without the lagrangian-side checks."""
    if isinstance(letter, Keep):
        return letter.iso
    w = letter.witness
    n = w.target.group.num_gens
    perm = [1, 0] + list(range(2, n))
    sigma_matrix = IntMatrix.from_rows(
        [[1 if j == perm[i] else 0 for j in range(n)] for i in range(n)], n
    )
    sigma = FormIso(w.target, w.target, GroupHom(w.target.group, w.target.group, sigma_matrix))
    return w.inverse().compose(sigma).compose(w)
