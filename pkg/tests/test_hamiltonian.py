import numpy as np
import pytest

from qqvqe.errors import (
    MissingEstimateError,
    TableParseError,
    TableValidationError,
    UnknownDistanceError,
)
from qqvqe.hamiltonian import (
    HAMILTONIAN_STRINGS,
    MolecularHamiltonian,
    builtin_table,
    build_matrix,
    combine_expectations,
    dump_table_csv,
    ground_state,
    load_table_csv,
    lookup_distance,
    measurement_groups,
)
from qqvqe.linalg import eig_hermitian, expectation, random_density_matrix, random_ket, string_matrix
from qqvqe.qpu import setting_for_group


def test_builtin_table_shape_and_order():
    table = builtin_table()
    assert [h.distance for h in table] == [0.05, 0.1, 0.2, 0.5, 0.7, 0.9, 1.1, 1.5, 2.0, 2.5]
    for h in table:
        assert set(h.weights) == set(HAMILTONIAN_STRINGS)


def test_builtin_values_spot_rows():
    table = builtin_table()
    r09 = lookup_distance(table, 0.9)
    assert r09.weights == {
        "II": -3.8505, "IZ": -1.0466, "ZI": -1.0466, "ZZ": 0.2356,
        "IX": -0.2288, "ZX": 0.2288, "XI": -0.2288, "XZ": 0.2288, "XX": 0.2613,
    }
    r005 = lookup_distance(table, 0.05)
    assert r005.weights["II"] == 33.9557
    assert r005.weights["XX"] == 0.1412
    assert lookup_distance(table, 2.5).weights["XX"] == 0.0032


def test_lookup_unknown_distance():
    with pytest.raises(UnknownDistanceError):
        lookup_distance(builtin_table(), 0.33)


def _single_term(string: str, weight: float) -> MolecularHamiltonian:
    weights = {s: 0.0 for s in HAMILTONIAN_STRINGS}
    weights[string] = weight
    return MolecularHamiltonian(1.0, weights)


def test_build_matrix_single_terms():
    assert np.allclose(build_matrix(_single_term("II", 1.0)), np.eye(4))
    assert np.allclose(build_matrix(_single_term("ZZ", 1.0)), np.diag([1, -1, -1, 1]))


def test_build_matrix_r09_ground_energy():
    h = lookup_distance(builtin_table(), 0.9)
    matrix = build_matrix(h)
    assert np.max(np.abs(matrix - matrix.conj().T)) < 1e-12
    vals, _ = eig_hermitian(matrix)
    # frozen from exact diagonalization of the transcribed row
    assert vals[0] == pytest.approx(-5.725241528153366, abs=1e-9)


def test_measurement_groups_contents():
    groups = measurement_groups(lookup_distance(builtin_table(), 0.9))
    as_dict = {gid: (strings, basis) for gid, strings, basis in groups}
    assert as_dict[1] == (("IZ", "ZI", "ZZ"), "ZZ")
    assert as_dict[2] == (("IX", "ZX"), "ZX")
    assert as_dict[3] == (("XI", "XZ"), "XZ")
    assert as_dict[4] == (("XX",), "XX")


def test_groups_partition_all_strings():
    groups = measurement_groups(lookup_distance(builtin_table(), 0.9))
    seen = ["II"]  # measured implicitly as the outcome sum
    for _, strings, _ in groups:
        seen.extend(strings)
    assert sorted(seen) == sorted(HAMILTONIAN_STRINGS)


def test_group_members_diagonal_in_setting_basis():
    groups = measurement_groups(lookup_distance(builtin_table(), 0.9))
    for _, strings, basis in groups:
        setting = setting_for_group(basis)
        basis_matrix = string_matrix(basis)
        for s in strings:
            m = string_matrix(s)
            assert np.max(np.abs(m @ basis_matrix - basis_matrix @ m)) < 1e-12
            in_eigenbasis = setting.eigenkets.conj().T @ m @ setting.eigenkets
            off_diag = in_eigenbasis - np.diag(np.diag(in_eigenbasis))
            assert np.max(np.abs(off_diag)) < 1e-10


def test_combine_expectations_examples():
    h = lookup_distance(builtin_table(), 0.9)
    zeros = {s: 0.0 for s in HAMILTONIAN_STRINGS if s != "II"}
    assert combine_expectations(h, zeros) == pytest.approx(-3.8505, abs=1e-12)

    ket00 = {"IZ": 1.0, "ZI": 1.0, "ZZ": 1.0, "IX": 0.0, "ZX": 0.0,
             "XI": 0.0, "XZ": 0.0, "XX": 0.0}
    assert combine_expectations(h, ket00) == pytest.approx(-5.7081, abs=1e-12)


def test_combine_matches_ground_state_oracle():
    h = lookup_distance(builtin_table(), 0.9)
    e0, ground = ground_state(h)
    estimates = {
        s: float(np.real(np.vdot(ground, string_matrix(s) @ ground)))
        for s in HAMILTONIAN_STRINGS
        if s != "II"
    }
    assert combine_expectations(h, estimates) == pytest.approx(e0, abs=1e-8)


def test_combine_missing_estimate():
    h = lookup_distance(builtin_table(), 0.9)
    with pytest.raises(MissingEstimateError):
        combine_expectations(h, {"IZ": 1.0})


def test_linearity_against_matrix_expectation():
    h = lookup_distance(builtin_table(), 0.9)
    matrix = build_matrix(h)
    for i in range(100):
        rho = random_density_matrix(4, (13, i))
        estimates = {
            s: float(np.real(np.trace(string_matrix(s) @ rho)))
            for s in HAMILTONIAN_STRINGS
        }
        assert combine_expectations(h, estimates) == pytest.approx(
            expectation(matrix, rho), abs=1e-8
        )


def test_minimum_eigenvalue_below_random_kets():
    h = lookup_distance(builtin_table(), 0.9)
    matrix = build_matrix(h)
    e0, _ = ground_state(h)
    best = min(
        float(np.real(np.vdot(k, matrix @ k)))
        for k in (random_ket(4, (15, i)) for i in range(10_000))
    )
    assert e0 <= best


def test_csv_round_trip(tmp_path):
    path = tmp_path / "table.csv"
    table = builtin_table()
    dump_table_csv(table, path)
    loaded = load_table_csv(path)
    assert len(loaded) == len(table)
    for a, b in zip(table, loaded):
        assert a.distance == b.distance
        assert a.weights == b.weights


def test_csv_parse_error_names_cell(tmp_path):
    path = tmp_path / "bad.csv"
    header = "R,II,IZ,ZI,ZZ,IX,ZX,XI,XZ,XX"
    path.write_text(f"{header}\n0.9,-3.8,oops,-1.0,0.2,0,0,0,0,0\n")
    with pytest.raises(TableParseError, match="column IZ"):
        load_table_csv(path)


def test_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("R,II\n0.9,1.0\n")
    with pytest.raises(TableParseError, match="header"):
        load_table_csv(path)


def test_csv_extra_rows_sorted(tmp_path):
    path = tmp_path / "extra.csv"
    header = "R,II,IZ,ZI,ZZ,IX,ZX,XI,XZ,XX"
    row = "-1.0,-1.0,0.1,0.0,0.0,0.0,0.0,0.1"
    path.write_text(f"{header}\n1.3,-4.0,{row}\n0.8,-3.9,{row}\n")
    loaded = load_table_csv(path)
    assert [h.distance for h in loaded] == [0.8, 1.3]


def test_csv_rejects_nonpositive_distance(tmp_path):
    path = tmp_path / "bad.csv"
    header = "R,II,IZ,ZI,ZZ,IX,ZX,XI,XZ,XX"
    path.write_text(f"{header}\n-0.5,1,0,0,0,0,0,0,0,0\n")
    with pytest.raises(TableValidationError):
        load_table_csv(path)


def test_csv_rejects_duplicate_distance(tmp_path):
    path = tmp_path / "dup.csv"
    header = "R,II,IZ,ZI,ZZ,IX,ZX,XI,XZ,XX"
    path.write_text(f"{header}\n0.9,1,0,0,0,0,0,0,0,0\n0.9,2,0,0,0,0,0,0,0,0\n")
    with pytest.raises(TableValidationError, match="duplicate"):
        load_table_csv(path)
