"""Section trees, combination costs, and reuse policies."""

from __future__ import annotations

import pytest

from polarkit.complexity import (
    CALIBRATED_MODE,
    ReuseMode,
    SectionNode,
    build_section_tree,
    comb_cost,
    extend_kernel,
    phase_cost,
    reuse_eligible,
    split_point,
    total_complexity,
    total_complexity_cached,
)
from polarkit.gf2 import BitMatrix
from polarkit.pdp import SingularKernelError
from polarkit.reference import ARIKAN, BEST12, BEST16
from tests.conftest import random_kernel


def _nodes(tree: SectionNode):
    yield tree
    for child in tree.children:
        yield from _nodes(child)


def test_extend_kernel_shape_and_flag():
    ext = extend_kernel(ARIKAN, 0)
    assert ext.ncols == 3
    assert ext.rows == (0b101, 0b110)  # appended column set only on the phase row
    ext = extend_kernel(ARIKAN, 1)
    assert ext.rows == (0b111,)


def test_extend_kernel_rejects_singular():
    with pytest.raises(SingularKernelError):
        extend_kernel(BitMatrix(2, (0b11, 0b11)), 0)


def test_comb_cost_formula():
    assert comb_cost(0, 0) == 1
    assert comb_cost(1, 1) == 6
    assert comb_cost(2, 1) == 14
    with pytest.raises(ValueError):
        comb_cost(-1, 0)


def test_split_point_midpoint():
    assert split_point(0, 8) == 4
    assert split_point(0, 5) == 2  # shorter part on the left


def test_root_v_is_one_every_phase(rng):
    for _ in range(20):
        ell = int(rng.integers(2, 9))
        kernel = random_kernel(ell, rng)
        for phase in range(ell):
            tree = build_section_tree(extend_kernel(kernel, phase))
            assert tree.v == 1


def test_dimension_monotonicity(rng):
    for _ in range(20):
        ell = int(rng.integers(2, 13))
        kernel = random_kernel(ell, rng)
        phase = int(rng.integers(0, ell))
        tree = build_section_tree(extend_kernel(kernel, phase))
        for node in _nodes(tree):
            assert node.k_p >= node.k_s
            if not node.is_leaf:
                left, right = node.children
                assert node.k_s >= left.k_s + right.k_s
                assert node.w == node.k_s - left.k_s - right.k_s


def test_last_phase_w_zero_everywhere(rng):
    """The last phase decodes a one-row code, so no node can gain
    shortened dimension over its children."""
    for _ in range(20):
        ell = int(rng.integers(2, 13))
        kernel = random_kernel(ell, rng)
        tree = build_section_tree(extend_kernel(kernel, ell - 1))
        for node in _nodes(tree):
            assert node.w == 0
            if not node.is_leaf:
                assert node.comb_cost == (1 << node.v)


def test_reuse_only_removes_cost(rng):
    for _ in range(15):
        ell = int(rng.integers(2, 9))
        kernel = random_kernel(ell, rng)
        none = total_complexity(kernel, ReuseMode.NONE).total
        for mode in (ReuseMode.TOP_SECTIONS, ReuseMode.ALL_CONTIGUOUS):
            assert total_complexity(kernel, mode).total <= none


def test_report_total_is_per_phase_sum(rng):
    for _ in range(10):
        kernel = random_kernel(int(rng.integers(2, 9)), rng)
        report = total_complexity(kernel)
        assert report.total == sum(p.cost for p in report.per_phase)
        assert phase_cost(build_section_tree(extend_kernel(kernel, 0))) == (
            report.per_phase[0].cost
        )


def test_first_phase_never_reuses(rng):
    report = total_complexity(random_kernel(8, rng))
    assert report.per_phase[0].reused == ()


def test_arikan_reuse_ineligible():
    """For the 2x2 kernel the root w/v representatives of the second
    phase fall outside the first phase's span, so nothing is reused."""
    prev = build_section_tree(extend_kernel(ARIKAN, 0))
    nxt = build_section_tree(extend_kernel(ARIKAN, 1))
    assert not reuse_eligible(prev, nxt)
    report = total_complexity(ARIKAN)
    assert all(p.reused == () for p in report.per_phase)


def test_reuse_eligible_requires_matching_interval():
    tree = build_section_tree(extend_kernel(ARIKAN, 0))
    with pytest.raises(ValueError):
        reuse_eligible(tree, tree.children[0])


def test_reference_totals_under_shipped_policy():
    """Pinned values of this evaluator (the published reference totals
    652/1396 are not reproduced; see the acceptance suite)."""
    assert total_complexity(BEST12, CALIBRATED_MODE).total == 1264
    assert total_complexity(BEST16, CALIBRATED_MODE).total == 2300
    assert total_complexity(BEST12, ReuseMode.NONE).total == 1354
    assert total_complexity(BEST16, ReuseMode.NONE).total == 2434


def test_cached_total_matches_report(rng):
    for _ in range(10):
        kernel = random_kernel(int(rng.integers(2, 7)), rng)
        for mode in ReuseMode:
            assert total_complexity_cached(kernel, mode) == total_complexity(kernel, mode).total


def test_size_bounds():
    with pytest.raises(ValueError):
        total_complexity(BitMatrix(1, (1,)))


def test_report_json_dict_shape():
    d = total_complexity(ARIKAN).to_json_dict()
    assert set(d) == {"ell", "policy", "total", "per_phase"}
    assert d["ell"] == 2
    assert {"phase", "cost", "reused"} == set(d["per_phase"][0])
