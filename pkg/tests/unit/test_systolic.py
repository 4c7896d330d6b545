import numpy as np
import pytest

from squarekit.algorithms.correction import real_mat_corrections, transform_corrections
from squarekit.algorithms.kernels_real import matmul_mac
from squarekit.algorithms.numeric import BitWidthPlan
from squarekit.hwsim.config import SimConfig
from squarekit.hwsim.systolic import systolic_cycles, systolic_run
from squarekit.hwsim.trace import shift_right
from squarekit.models.enums import Arch, TraceLevel, Variant
from squarekit.models.matrix import Matrix
from squarekit.utils.errors import (
    BitWidthError,
    ConfigurationError,
    DimensionMismatchError,
    ValidationError,
)

A = Matrix.from_rows([[1, 2], [3, 4]])
B = Matrix.from_rows([[5, 6], [7, 8]])
PLAN = BitWidthPlan.for_inputs(8, 16)


def config(variant=Variant.SQ, **kwargs):
    return SimConfig(arch=Arch.SYSTOLIC, variant=variant, bitplan=PLAN, **kwargs)


def test_two_by_two_example():
    C2, trace = systolic_run(A, B, None, config())
    assert C2.tolist() == [[38, 44], [86, 100]]
    assert shift_right(C2).tolist() == [[19, 22], [43, 50]]
    assert trace.cycles_total == 7
    assert trace.width_violations == []


def test_cycle_count_formula():
    assert systolic_cycles(2, 2, 2) == 7
    assert systolic_cycles(3, 4, 5) == 2 * 3 + 4 + 5 - 1


def test_final_state_holds_outputs():
    _, trace = systolic_run(A, B, None, config())
    assert trace.final_state["O[0][0]"] == 38
    assert trace.final_state["O[1][1]"] == 100


def test_mac_variant_is_exact_product():
    C, trace = systolic_run(A, B, None, config(Variant.MAC))
    assert C.tolist() == [[19, 22], [43, 50]]
    assert trace.cycles_total == 7


def test_load_phase_places_rows_of_a():
    _, trace = systolic_run(A, B, None, config())
    loaded = {e.unit: e.value for e in trace.signal("REGA") if e.cycle == A.rows - 1}
    # PE(k, i) holds a_ik once loading ends
    assert loaded == {"pe[0][0]": 1, "pe[0][1]": 3, "pe[1][0]": 2, "pe[1][1]": 4}


def test_muxsel_only_at_full_level():
    _, quiet = systolic_run(A, B, None, config())
    assert quiet.signal("MUXSEL") == []
    _, full = systolic_run(A, B, None, config(trace_level=TraceLevel.FULL))
    values = {(e.cycle, e.value) for e in full.signal("MUXSEL", "pe[0][0]")}
    assert values == {(0, 0), (A.rows, 1)}


def test_final_level_records_outputs_only():
    _, trace = systolic_run(A, B, None, config(trace_level=TraceLevel.FINAL))
    assert {e.signal for e in trace.events} == {"O"}
    assert len(trace.events) == 4


@pytest.mark.parametrize("dims", [(1, 1, 1), (3, 2, 4), (4, 5, 2), (5, 16, 3)])
def test_matches_twice_the_product(dims):
    M, N, P = dims
    rng = np.random.default_rng(sum(dims))
    X = Matrix.from_rows(rng.integers(-127, 127, size=(M, N), endpoint=True).tolist())
    Y = Matrix.from_rows(rng.integers(-127, 127, size=(N, P), endpoint=True).tolist())
    C2, trace = systolic_run(X, Y, real_mat_corrections(X, Y), config())
    expected, _ = matmul_mac(X, Y)
    assert (C2.values == 2 * expected.values).all()
    assert trace.cycles_total == systolic_cycles(M, N, P)
    assert trace.width_violations == []


def test_extreme_inputs_fit_planned_widths():
    X = Matrix.from_rows([[-128] * 16, [127] * 16])
    Y = Matrix.from_rows([[-128]] * 16)
    _, trace = systolic_run(X, Y, None, config())
    assert trace.width_violations == []


def test_width_violation_strict_and_lenient():
    narrow = BitWidthPlan.for_inputs(4, 2)
    big = Matrix.from_rows([[100, 100], [100, 100]])
    strict = SimConfig(arch=Arch.SYSTOLIC, variant=Variant.SQ, bitplan=narrow)
    with pytest.raises(BitWidthError):
        systolic_run(big, big, None, strict)
    lenient = strict.model_copy(update={"strict_widths": False})
    C2, trace = systolic_run(big, big, None, lenient)
    assert trace.width_violations
    assert C2.tolist() == [[40000, 40000], [40000, 40000]]


def test_illegal_variant():
    with pytest.raises(ConfigurationError):
        SimConfig(arch=Arch.SYSTOLIC, variant=Variant.CPM3, bitplan=PLAN)


def test_wrong_arch_config():
    cfg = SimConfig(arch=Arch.TENSOR_CORE, variant=Variant.SQ, bitplan=PLAN)
    with pytest.raises(ConfigurationError):
        systolic_run(A, B, None, cfg)


def test_array_dims_must_match_operands():
    with pytest.raises(DimensionMismatchError):
        systolic_run(A, B, None, config(array_dims=(3, 3)))


def test_wrong_correction_kind():
    with pytest.raises(ValidationError):
        systolic_run(A, B, transform_corrections(A), config())


def test_trace_csv_is_deterministic():
    _, first = systolic_run(A, B, None, config(trace_level=TraceLevel.FULL))
    _, second = systolic_run(A, B, None, config(trace_level=TraceLevel.FULL))
    text = first.to_csv()
    assert text == second.to_csv()
    assert text.splitlines()[0] == "cycle,unit,signal,value"
    cycles = [int(line.split(",")[0]) for line in text.splitlines()[1:]]
    assert cycles == sorted(cycles)
