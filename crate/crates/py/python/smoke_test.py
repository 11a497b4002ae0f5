"""Smoke test for the fbc extension module. Run after `maturin develop`."""

import fbc

psi = fbc.FreeMap("a->b; b->c; c->cA")
assert psi.rank == 3
assert str(psi.invert()) == "a->Cb; b->a; c->b"
assert psi.compose(psi.invert()).is_identity()

try:
    fbc.FreeMap("a->a; b->a; c->c").invert()
    raise AssertionError("expected NotAutomorphismError")
except fbc.NotAutomorphismError:
    pass

try:
    fbc.FreeMap("a->b; a->c")
    raise AssertionError("expected FbcError")
except fbc.FbcError as e:
    assert "more than one rule" in str(e)

w = fbc.Word(3, "abC")
assert len(w * w.inverse()) == 0
assert psi.apply(w) == fbc.Word(3, "bcaC")
assert fbc.Word(3, "Aba").canonical_cyclic() == "b"

g = psi.mapping_torus()
assert str(g) == "gens: a b c t; rel: TatB; rel: TbtC; rel: TctaC"
assert g.abelian_invariants() == (1, [])
assert fbc.Presentation("gens: a t; rel: Tata").abelian_invariants() == (1, [2])
assert fbc.mapping_torus_invariants(psi) == (1, [])

s = fbc.stretch(psi)
assert 1.157 <= s["min"] <= 1.177 and s["converged"], s
assert abs(fbc.transition_bound(psi) - 1.46557) < 1e-4

assert fbc.periodic_classes(psi) == []
swap = fbc.FreeMap("a->b; b->a; c->c")
assert ("c", 1) in fbc.periodic_classes(swap, 2, 2)

s3 = fbc.Group("S3", ["(1 2)", "(1 2 3)"])
assert s3.order == 6
assert fbc.count_homs(fbc.Presentation.free(2), s3) == (36, 18)

fp = fbc.fingerprint(g)
assert fp[0] == ("Z/2", 2, 2, 1)
assert fbc.compare(g, psi.invert().mapping_torus()) is None
assert fbc.compare(g, swap.mapping_torus()) == ("Z/2", (2, 1), (8, 7))

sigma = fbc.FreeMap.random(3, 6, seed=11)
assert sigma.invert().compose(sigma).is_identity()

print("fbc", fbc.__version__, "smoke test ok")
