"""Coderivation presentation of an L-infinity structure and its CE dual.

The suspension s lowers the cohomological degree by one, so a bracket
l_k of degree 2-k corresponds to a component Q^k of uniform degree +1 on
the free graded-cocommutative coalgebra on s(basis).  The transfer sign
is the decalage sign

    Q^k(s x_1 ^ ... ^ s x_k)
        = (-1)^{sum_i (k-i)(|x_i|-1)} s l_k(x_1, ..., x_k),

under which Q^2 = 0 on words of length <= A is equivalent to the
generalized Jacobi identities up to arity A (a tested property, not an
assumption).  Words in the exterior algebra on s(basis) are graded
commutative for the shifted degrees: generators of odd shifted degree
square to zero, generators of even shifted degree (for example the
suspension of a degree-1 element) repeat freely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import StructuralError, Vec, is_zero, sign_pow, vadd, vclean, vscale
from .linf import LInftyAlgebra

Word = tuple  # canonically sorted tuple of basis ids, one letter per suspended generator


def sdegree(g: LInftyAlgebra, ident) -> int:
    return g.space.degree_of(ident) - 1


def sort_word_with_sign(g: LInftyAlgebra, letters):
    """Sort letters by basis position with symmetric Koszul signs on s-degrees.

    Returns (word, sign); sign 0 when a letter of odd shifted degree repeats.
    """
    keyed = [(g.space.index_of(i), sdegree(g, i), i) for i in letters]
    sign = 1
    lst = list(keyed)
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j][0] > lst[j + 1][0]:
                sign *= sign_pow(lst[j][1] * lst[j + 1][1])
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
    for a, b in zip(lst, lst[1:]):
        if a[0] == b[0] and a[1] % 2 == 1:
            return tuple(x[2] for x in lst), 0
    return tuple(x[2] for x in lst), sign


def extract_sign(g: LInftyAlgebra, word: Word, positions) -> int:
    """Koszul sign for pulling the chosen positions to the front of the word.

    Each extracted letter passes the non-extracted letters sitting before
    it; relative orders within both groups are preserved.
    """
    degs = [sdegree(g, l) for l in word]
    chosen = set(positions)
    sign = 1
    for p in sorted(positions):
        for q in range(p):
            if q not in chosen:
                sign *= sign_pow(degs[p] * degs[q])
    return sign


def decalage_sign(g: LInftyAlgebra, ids) -> int:
    k = len(ids)
    e = sum((k - i - 1) * (g.space.degree_of(ident) - 1)
            for i, ident in enumerate(ids))
    return sign_pow(e)


def words_up_to(g: LInftyAlgebra, bound: int):
    """All canonical words of length 1..bound (letters of odd s-degree unrepeated)."""
    out = []
    ids = g.space.ids
    for k in range(1, bound + 1):
        for combo in itertools.combinations_with_replacement(ids, k):
            _, sign = sort_word_with_sign(g, combo)
            if sign != 0:
                out.append(tuple(combo))
    return out


@dataclass
class CoderivationPresentation:
    algebra: LInftyAlgebra
    word_bound: int
    # components[k][word of length k] = dict letter -> Fraction (value in s(basis))
    components: dict = field(default_factory=dict)
    # the full coderivation on materialized words:  word -> {word: Fraction}
    action: dict = field(default_factory=dict)
    # dual CE differential on generators: id -> list of (Fraction, word)
    ce_dual: dict = field(default_factory=dict)

    def q_on_word(self, word: Word) -> dict:
        return dict(self.action.get(tuple(word), {}))

    def q_squared_on_word(self, word: Word) -> dict:
        out = {}
        for w1, c1 in self.q_on_word(word).items():
            for w2, c2 in self.q_on_word(w1).items():
                s = out.get(w2, 0) + c1 * c2
                if s:
                    out[w2] = s
                elif w2 in out:
                    del out[w2]
        return out

    def q_squared_is_zero(self, bound=None) -> bool:
        bound = self.word_bound if bound is None else bound
        return all(
            not self.q_squared_on_word(w)
            for w in words_up_to(self.algebra, bound)
        )


def _component_tables(g: LInftyAlgebra):
    comps = {}
    for k in range(1, g.kmax + 1):
        table = g.table.entries.get(k, {})
        comp = {}
        for key, val in table.items():
            word, sign = sort_word_with_sign(g, key)
            if sign == 0:
                # legal bracket entry (odd degree repeats) never maps to an
                # illegal word: |x| odd means s-degree even, so this cannot
                # happen; guard anyway
                raise StructuralError("bracket entry %r has no suspended word" % (key,))
            comp[word] = vscale(sign * decalage_sign(g, key), val)
        comps[k] = comp
    return comps


def brackets_from_components(g: LInftyAlgebra, comps):
    """Inverse transfer: recover the bracket table values from Q components."""
    out = {}
    for k, comp in comps.items():
        table = {}
        for word, val in comp.items():
            table[word] = vscale(decalage_sign(g, word), val)
        out[k] = table
    return out


def chevalley_eilenberg(g: LInftyAlgebra, word_bound: int) -> CoderivationPresentation:
    """Build Q from the brackets and extend it as a coderivation.

    Also exposes the dual differential on the free graded-commutative
    algebra on the dual suspended generators, as a table
    generator -> sum of dual words.
    """
    comps = _component_tables(g)
    pres = CoderivationPresentation(g, word_bound, comps)
    for word in words_up_to(g, word_bound):
        n = len(word)
        image = {}
        for k in range(1, min(n, g.kmax) + 1):
            comp = comps.get(k, {})
            if not comp:
                continue
            for positions in itertools.combinations(range(n), k):
                sub = tuple(word[p] for p in positions)
                subword, subsign = sort_word_with_sign(g, sub)
                if subsign == 0:
                    continue
                val = comp.get(subword)
                if not val:
                    continue
                esign = extract_sign(g, word, positions)
                rest = tuple(word[p] for p in range(n) if p not in positions)
                for letter, c in val.items():
                    new, nsign = sort_word_with_sign(g, (letter,) + rest)
                    if nsign == 0:
                        continue
                    coeff = esign * subsign * nsign * c
                    s = image.get(new, 0) + coeff
                    if s:
                        image[new] = s
                    elif new in image:
                        del image[new]
        if image:
            pres.action[word] = image
    # dual differential table: transpose of the corestrictions
    for b in g.space.ids:
        terms = []
        for k in range(1, g.kmax + 1):
            for word, val in comps.get(k, {}).items():
                c = val.get(b)
                if c:
                    terms.append((c, word))
        pres.ce_dual[b] = terms
    return pres


def roundtrip_table(g: LInftyAlgebra, pres: CoderivationPresentation):
    """Brackets -> Q -> brackets; identity on the table by construction, tested."""
    rebuilt = brackets_from_components(g, pres.components)
    out = {}
    for k, table in rebuilt.items():
        out[k] = {key: vclean(val) for key, val in table.items() if vclean(val)}
    return out
