"""Smoke test for the Python bindings. Run after `pip install -e crates/python`."""

import multinorm


def main():
    v4 = multinorm.AbelianGroup([2, 2])
    assert str(v4) == "Z/2 ⊕ Z/2", str(v4)
    assert v4.order == 4
    assert v4.exterior_square() == multinorm.AbelianGroup([2])
    assert str(multinorm.AbelianGroup([12]).exterior_square()) == "trivial"

    # All cyclic subgroups of the Klein four group as decomposition groups.
    assert multinorm.sha(v4) == multinorm.AbelianGroup([2])
    assert multinorm.sha(v4, [[[0, 1]], [[1, 0]], [[1, 1]]]).invariant_factors == [2]
    assert multinorm.sha(v4, [[[1, 0], [0, 1]]]).is_trivial()

    k = multinorm.Field.quadratic(13).compositum(multinorm.Field.quadratic(17))
    assert k.degree == 4 and k.conductor == 221
    assert str(k.sha()) == "Z/2"
    assert k.decomposition_group("inf").is_trivial()

    l1 = multinorm.Field(7, [2])
    assert multinorm.Field(7, [2]).multinorm_obstruction(l1).is_trivial()

    tower = multinorm.Tower.linearly_disjoint(v4, multinorm.AbelianGroup([3]))
    cert = tower.certificate()
    assert cert["verdict"] and not cert["failures"], cert

    try:
        multinorm.Tower(multinorm.AbelianGroup([2, 4]), [[0, 2]], [[0, 1]])
    except ValueError:
        pass
    else:
        raise AssertionError("overlapping subgroups were accepted")

    gens, n1, n2 = multinorm.quartic_model()
    assert multinorm.second_obstruction(gens, n1, n2) == (1, False)

    report = multinorm.sweep(8, 2, 0)
    assert report["certificates"] > 0 and not report["failures"], report

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
