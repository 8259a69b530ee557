import math
import threading

import numpy as np
import pytest

import charshift.homocrypt as hc
from charshift.errors import DomainError, UnresolvedError
from charshift.homocrypt import HomoOracle, build_legendre_query, break_cryptosystem, homo_new
from charshift.numtheory import legendre_symbol


def test_homomorphism():
    oracle = HomoOracle(31, seed=1)
    for x in range(0, 31, 5):
        for y in range(0, 31, 7):
            ex, ey = oracle._encrypt(x), oracle._encrypt(y)
            assert oracle._plain(oracle.A(ex, ey)) == (x + y) % 31
            assert oracle._plain(oracle.M(ex, ey)) == x * y % 31
            assert oracle.Z(ex) == (x != 0)


def test_handles_are_fresh_and_opaque():
    oracle = HomoOracle(7, seed=0)
    a, b = oracle._encrypt(3), oracle._encrypt(3)
    assert a != b
    assert "token" not in repr(a)


def test_foreign_handle_rejected():
    o1, e1 = homo_new(7, 2, seed=1)
    o2, _ = homo_new(7, 2, seed=2)
    with pytest.raises(DomainError):
        o2.Z(e1)


@pytest.mark.parametrize("p", [2, 9, 8209])
def test_bad_prime(p):
    with pytest.raises(DomainError):
        HomoOracle(p)


def test_concurrent_issuance():
    oracle, es = homo_new(101, 5, seed=3)
    out = []

    def work():
        out.extend(oracle.A(es, es) for _ in range(200))

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len({h.token for h in out}) == 800
    assert oracle.calls["A"] == 800


@pytest.mark.parametrize("p", [7, 11, 31])
def test_legendre_query(p):
    for s in range(1, p):
        oracle, es = homo_new(p, s, seed=s)
        query = build_legendre_query(oracle, es)
        assert [query(x) for x in range(p)] == [legendre_symbol(x + s, p) for x in range(p)]
        assert query.max_call_cost <= 8 * math.log2(p)
        assert query.encrypts(es, s) and not query.encrypts(es, (s + 1) % p)


def test_break_example():
    oracle, es = homo_new(7, 4, seed=0)
    report = break_cryptosystem(oracle, es, seed=0)
    assert report.secret == 4
    assert report.logical_queries == 2 * report.preparations


def test_break_zero_secret():
    oracle, es = homo_new(31, 0, seed=0)
    report = break_cryptosystem(oracle, es)
    assert report.secret == 0 and report.preparations == 0
    assert oracle.total_calls == 1


def test_break_p31_many_seeds():
    for seed in range(100):
        s = int(np.random.default_rng(seed).integers(31))
        oracle, es = homo_new(31, s, seed=seed)
        assert break_cryptosystem(oracle, es, seed=seed).secret == s


def test_exact_mode():
    oracle, es = homo_new(101, 77, seed=9)
    assert break_cryptosystem(oracle, es, mode="exact").secret == 77


def test_attack_uses_only_public_operations(monkeypatch):
    oracle, es = homo_new(31, 12, seed=4)

    def forbidden(*_):
        raise AssertionError("backdoor used")

    table_reads = []
    original = HomoOracle._plain
    monkeypatch.setattr(oracle, "_encrypt", forbidden)
    monkeypatch.setattr(HomoOracle, "_plain", lambda self, h: table_reads.append(1) or original(self, h))
    report = break_cryptosystem(oracle, es, seed=1)
    assert report.secret == 12
    # every table read happens inside A, M or Z: A and M read two handles, Z one
    assert len(table_reads) == 2 * (oracle.calls["A"] + oracle.calls["M"]) + oracle.calls["Z"]
    assert report.simulated_calls == oracle.total_calls


def test_total_cost_bound():
    for p in [31, 101, 1009]:
        oracle, es = homo_new(p, 3, seed=p)
        report = break_cryptosystem(oracle, es, seed=p)
        per_prep = p * 8 * math.log2(p)
        setup = 4 * math.log2(p) + 4
        assert report.simulated_calls <= report.preparations * per_prep + setup + 8 * math.log2(p)


def test_retry_budget_exhausted(monkeypatch):
    oracle, es = homo_new(7, 3, seed=0)
    monkeypatch.setattr(hc, "solve_shift_ff", lambda *a, **k: (_ for _ in ()).throw(hc.ShiftMiss("x")))
    with pytest.raises(UnresolvedError):
        break_cryptosystem(oracle, es, max_retries=3)
