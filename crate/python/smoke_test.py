"""Smoke test for the pyratli extension; run python/build.sh first."""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pyratli as r


def main():
    p = r.Poly("x0")
    q = r.Poly("x1 x0")
    s = p.shuffle(q)
    assert s.coeff("x1 x0 x0") == "2", s
    assert r.Poly("y1").stuffle(r.Poly("y1")) == r.Poly("2 * y1 y1 + y2")

    series = r.RatSeries("x0* # x1*")
    assert series.coeff("x0 x1") == "1"
    assert str(r.RatSeries("x0* # (-x0)*").truncate(12)) == "1"
    try:
        r.RatSeries("(x0 + 1)*")
    except ValueError as e:
        assert "non-proper" in str(e)
    else:
        raise AssertionError("improper star accepted")

    gen = r.StarPoly("x0* # x1* - x1* + 1")
    assert gen.rewrite().is_zero()
    li = r.CFunction.from_word("x1")
    assert abs(li.eval(0.5) - 0.6931471805599453) < 1e-12
    assert li.theta1().iota1() == li

    assert r.a_coeffs("y2 y0") == ["0", "-2", "10", "-14", "6"]
    assert r.neg_hsum("y1", 10) == "55"
    assert r.gamma_neg([-1, -1]) == "11/24"
    assert r.faulhaber("y3") == "6*C(N+2,4) + 1*C(N+1,2)"
    assert r.newton_girard_check(20, 8)
    assert r.lyndon_words(3) == ["x0", "x0 x0 x1", "x0 x1", "x0 x1 x1", "x1"]

    code, out, _ = r.run_cli(["gamma", "--", "-1", "-1"])
    assert code == 0 and json.loads(out) == {"gamma": "11/24"}
    print("pyratli smoke test passed")


if __name__ == "__main__":
    main()
