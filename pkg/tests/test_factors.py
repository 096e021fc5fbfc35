"""One-factor surgery: rotate3, swaps, class E, and the merge lemma."""

from __future__ import annotations

import random

import pytest

from circham.certs import CircuitCert
from circham.factors import (
    OneFactor,
    TransversalBits,
    cert_from_factor,
    components,
    constant_factor,
    e_from_transversal,
    is_in_class_e,
    lemma45_merge,
    one_factor_from_cert,
    rotate3,
    shift_travel,
    swap_in_arcs,
    transversal_of,
)
from circham.zmod import CirculantSpec, HalfSpec

from conftest import all_one_factors, random_factor


def _sigma_by_walk(succ: list[int], triple: tuple[int, int, int]) -> tuple[int, ...]:
    # independent of RewireTriple: first triple vertex reached after each u_i
    out = []
    for u in triple:
        w = succ[u]
        while w not in triple:
            w = succ[w]
        out.append(triple.index(w) + 1)
    return tuple(out)


def _all_halfspecs(two_k_max: int):
    for k in range(2, two_k_max // 2 + 1):
        for a in range(1, 2 * k):
            for b in range(1, k):
                if a not in (b, b + k):
                    yield HalfSpec(a=a, b=b, k=k)


def test_one_factor_validation() -> None:
    spec = CirculantSpec(4, (1, 2))
    OneFactor(spec, (0, 0, 0, 0))
    with pytest.raises(ValueError):
        OneFactor(spec, (0, 0, 0))  # wrong length
    with pytest.raises(ValueError):
        OneFactor(spec, (0, 0, 0, 2))  # bad generator index
    with pytest.raises(ValueError):
        OneFactor(spec, (0, 1, 0, 0))  # 1 -> 3 and 2 -> 3 collide


def test_constant_factor_components() -> None:
    spec = CirculantSpec(6, (2, 3))
    H = constant_factor(spec, 2)
    count, label = components(H)
    assert count == 2
    assert label == [0, 1, 0, 1, 0, 1]
    assert components(constant_factor(spec, 3)) == (3, [0, 1, 2, 0, 1, 2])
    with pytest.raises(ValueError):
        constant_factor(spec, 4)


def test_rotate3_example() -> None:
    spec = CirculantSpec(6, (1, 3))
    H = constant_factor(spec, 1)
    out, tri = rotate3(H, 0, 2, 4)
    assert out.succ_list() == [3, 2, 5, 4, 1, 0]
    count, label = components(out)
    assert count == 1  # single 6-cycle (0 3 4 1 2 5)
    assert tri.u == (0, 2, 4)
    assert tri.v == (1, 3, 5)
    assert tri.sigma == (2, 3, 1)
    assert tri.sigma_prime == (3, 1, 2)
    assert _sigma_by_walk(out.succ_list(), tri.u) == tri.sigma_prime


def test_rotate3_errors() -> None:
    spec = CirculantSpec(6, (1, 3))
    H = constant_factor(spec, 1)
    with pytest.raises(ValueError, match="distinct"):
        rotate3(H, 0, 2, 2)
    # 0 -> succ(1) = 2 would need generator 2
    with pytest.raises(ValueError, match="generator"):
        rotate3(H, 0, 1, 2)


def test_swap_example() -> None:
    spec = CirculantSpec(4, (1, 3))
    H = constant_factor(spec, 1)
    out = swap_in_arcs(H, 0, 2)
    assert out.succ_list() == [3, 2, 1, 0]
    assert components(out)[0] == 2
    assert swap_in_arcs(out, 0, 2) == H  # involution


def test_swap_errors() -> None:
    with pytest.raises(ValueError, match="even"):
        swap_in_arcs(constant_factor(CirculantSpec(5, (1, 2)), 1), 0, 2)
    spec = CirculantSpec(6, (1, 3))
    H = constant_factor(spec, 1)
    with pytest.raises(ValueError, match="w2"):
        swap_in_arcs(H, 0, 2)
    with pytest.raises(ValueError, match="partner"):
        swap_in_arcs(H, 0, 3)  # 1 + 3 = 4 is not a generator


EX = HalfSpec(a=2, b=3, k=6)  # spec Cay(Z_12; 2, 3, 9)


def test_e_from_transversal_example() -> None:
    H = e_from_transversal(EX, TransversalBits((True,) * 6))
    assert H.succ_list() == [2, 3, 4, 5, 6, 7, 9, 10, 11, 0, 1, 8]
    assert H.gen_value(11) == 9  # the one b+k arc: 11 -> 8
    count, label = components(H)
    assert count == 3
    assert label == [0, 1, 0, 1, 0, 1, 0, 1, 2, 0, 1, 2]
    assert is_in_class_e(H, EX)
    assert transversal_of(H, EX) == TransversalBits((True,) * 6)


def test_e_from_transversal_validation() -> None:
    with pytest.raises(ValueError, match="bits"):
        e_from_transversal(EX, TransversalBits((True,) * 5))
    H = constant_factor(EX.spec, 2)
    assert not is_in_class_e(H, EX)
    with pytest.raises(ValueError, match="class E"):
        transversal_of(H, EX)
    with pytest.raises(ValueError, match="match"):
        is_in_class_e(H, HalfSpec(a=2, b=3, k=7))


def test_lemma45_example() -> None:
    H = e_from_transversal(EX, TransversalBits((True,) * 6))
    out = lemma45_merge(H, EX, 2)
    # exactly the arcs leaving 2 and 8 and the arc entering 10 changed
    assert out.succ(2) == 11 and out.succ(8) == 10 and out.succ(7) == 4
    walk = [0]
    for _ in range(11):
        walk.append(out.succ(walk[-1]))
    assert walk == [0, 2, 11, 8, 10, 1, 3, 5, 7, 4, 6, 9]
    assert components(out)[0] == 1
    assert is_in_class_e(out, EX)


def test_lemma45_errors() -> None:
    H = e_from_transversal(EX, TransversalBits((True,) * 6))
    with pytest.raises(ValueError, match="share a component"):
        lemma45_merge(H, EX, 0)  # 0 and 0 + a + k = 10... 0 and 6 collide first
    with pytest.raises(ValueError, match="not by a"):
        lemma45_merge(H, EX, 6)  # 6 travels by b = 3
    with pytest.raises(ValueError, match="class-E"):
        lemma45_merge(constant_factor(EX.spec, 2), EX, 0)


def test_shift_travel_example() -> None:
    bits = TransversalBits((True,) * 6)
    H = e_from_transversal(EX, bits)
    out = shift_travel(H, EX, 2)
    flipped = list(bits.bits)
    flipped[2] = False
    assert transversal_of(out, EX) == TransversalBits(tuple(flipped))
    # the same rewiring as the merge at u = 2
    assert out == lemma45_merge(H, EX, 2)
    diffs = [v for v in range(12) if out.succ(v) != H.succ(v)]
    assert diffs == [2, 7, 8]
    # shifting the coset back is the identity; 8 is now the a-traveler
    assert shift_travel(out, EX, 8) == H
    with pytest.raises(ValueError, match="not by a"):
        shift_travel(H, EX, 6)
    with pytest.raises(ValueError, match="class-E"):
        shift_travel(constant_factor(EX.spec, 2), EX, 0)


def test_cert_factor_roundtrip() -> None:
    spec = CirculantSpec(4, (1, 3))
    H = constant_factor(spec, 1)
    cert = cert_from_factor(H)
    assert cert == CircuitCert(start=0, steps=(1, 1, 1, 1))
    assert one_factor_from_cert(spec, cert) == H
    with pytest.raises(ValueError, match="components"):
        cert_from_factor(swap_in_arcs(H, 0, 2))
    with pytest.raises(ValueError, match="verify"):
        one_factor_from_cert(spec, CircuitCert(start=0, steps=(1, 1, 1, 2)))


def test_rotate3_parity_random() -> None:
    # randomized (spec, factor, legal triple) instances; the component count
    # parity never moves and the re-entry permutation picks up (1 2 3)
    rng = random.Random(4501)
    accepted = 0
    while accepted < 10_000:
        n = rng.randrange(6, 51)
        outdeg = rng.choice((3, 4))
        gens = tuple(sorted(rng.sample(range(1, n), outdeg)))
        spec = CirculantSpec(n, gens)
        H = OneFactor(spec, random_factor(spec, rng))
        pred = H.pred_list()
        gset = set(gens)
        triples = []
        for u1 in range(n):
            v1 = H.succ(u1)
            for g in gens:
                u2 = pred[(u1 + g) % n]
                for g2 in gens:
                    u3 = pred[(u2 + g2) % n]
                    if len({u1, u2, u3}) == 3 and (v1 - u3) % n in gset:
                        triples.append((u1, u2, u3))
        if not triples:
            continue
        before, _ = components(H)
        for u1, u2, u3 in rng.sample(triples, min(25, len(triples))):
            out, tri = rotate3(H, u1, u2, u3)
            after, _ = components(out)
            assert (after - before) % 2 == 0
            sigma = _sigma_by_walk(H.succ_list(), (u1, u2, u3))
            assert tri.sigma == sigma
            assert tri.sigma_prime == (sigma[1], sigma[2], sigma[0])
            assert _sigma_by_walk(out.succ_list(), (u1, u2, u3)) == tri.sigma_prime
            accepted += 1


def test_swap_delta_random() -> None:
    rng = random.Random(4502)
    done = 0
    while done < 1_000:
        k = rng.randrange(2, 26)
        n = 2 * k
        g = rng.randrange(1, n)
        gens = {g, (g + k) % n}
        gens.add(rng.randrange(1, n))
        if 0 in gens:
            continue
        spec = CirculantSpec(n, tuple(sorted(gens)))
        H = OneFactor(spec, random_factor(spec, rng))
        gset = set(spec.gens)
        ws = [
            w
            for w in range(k)
            if (H.gen_value(w) + k) % n in gset
            and (H.gen_value(w + k) + k) % n in gset
        ]
        if not ws:
            continue
        w1 = rng.choice(ws)
        before, _ = components(H)
        out = swap_in_arcs(H, w1, w1 + k)
        after, _ = components(out)
        assert abs(after - before) == 1
        assert swap_in_arcs(out, w1, w1 + k) == H
        done += 1


def test_class_e_is_transversal_image() -> None:
    # over every half-spec with 2k <= 16: the factors passing is_in_class_e
    # are exactly the 2^k transversal constructions, no dupes
    for h in _all_halfspecs(16):
        spec = h.spec
        in_e = {
            travel
            for travel in all_one_factors(spec)
            if is_in_class_e(OneFactor(spec, travel), h)
        }
        built = set()
        for mask in range(1 << h.k):
            bits = TransversalBits(tuple(bool(mask >> c & 1) for c in range(h.k)))
            H = e_from_transversal(h, bits)
            built.add(H.travel)
            assert transversal_of(H, h) == bits
        assert len(built) == 1 << h.k
        assert built == in_e


def test_e_parity_constant() -> None:
    # the component-count parity of a class-E factor is an invariant of the
    # half-spec, not of the transversal
    for h in _all_halfspecs(14):
        parities = {
            components(
                e_from_transversal(
                    h, TransversalBits(tuple(bool(m >> c & 1) for c in range(h.k)))
                )
            )[0]
            % 2
            for m in range(1 << h.k)
        }
        assert len(parities) == 1, h


def test_lemma45_drops_two_random() -> None:
    rng = random.Random(4503)
    applied = 0
    for _ in range(400):
        k = rng.randrange(3, 16)
        a = rng.randrange(1, 2 * k)
        b = rng.randrange(1, k)
        if a in (b, b + k):
            continue
        h = HalfSpec(a=a, b=b, k=k)
        H = e_from_transversal(
            h, TransversalBits(tuple(rng.random() < 0.5 for _ in range(k)))
        )
        count, label = components(H)
        if count < 3:
            continue
        n = 2 * k
        for u in range(n):
            if H.gen_value(u) != a:
                continue
            trip = (label[u], label[(u + k) % n], label[(u + a + k) % n])
            if len(set(trip)) == 3:
                out = lemma45_merge(H, h, u)
                assert components(out)[0] == count - 2
                assert is_in_class_e(out, h)
                applied += 1
                break
    assert applied >= 100


def test_shift_reaches_any_transversal() -> None:
    # walking the differing cosets turns any class-E factor into any other
    rng = random.Random(4504)
    for _ in range(150):
        k = rng.randrange(2, 13)
        a = rng.randrange(1, 2 * k)
        b = rng.randrange(1, k)
        if a in (b, b + k):
            continue
        h = HalfSpec(a=a, b=b, k=k)
        src = tuple(rng.random() < 0.5 for _ in range(k))
        dst = tuple(rng.random() < 0.5 for _ in range(k))
        H = e_from_transversal(h, TransversalBits(src))
        parity = components(H)[0] % 2
        shifts = 0
        for c in range(k):
            if src[c] != dst[c]:
                u1 = c if src[c] else c + k
                H = shift_travel(H, h, u1)
                shifts += 1
        assert shifts <= k
        assert H == e_from_transversal(h, TransversalBits(dst))
        assert components(H)[0] % 2 == parity
