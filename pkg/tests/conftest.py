import pytest

from costquery import Instance, Prior, Question


@pytest.fixture
def two_hyp_instance() -> Instance:
    """Two hypotheses, one separating question of cost 5: a forced move."""
    return Instance(
        hypotheses=("left", "right"),
        prior=Prior((0.5, 0.5)),
        questions=(Question("q0", 5.0, (0, 1)),),
    )


@pytest.fixture
def ratio_instance() -> Instance:
    """Four uniform hypotheses where the cheap unbalanced split wins.

    q1 (cost 1) splits 2|2: shrinkage 0.5, ratio 0.5.
    q2 (cost 0.4) splits 1|3: shrinkage 0.375, ratio 0.9375.
    q3 (cost 1) splits 2|2 the other way, needed for identifiability.
    """
    return Instance(
        hypotheses=("a", "b", "c", "d"),
        prior=Prior.uniform(4),
        questions=(
            Question("q1", 1.0, (0, 0, 1, 1)),
            Question("q2", 0.4, (0, 1, 1, 1)),
            Question("q3", 1.0, (0, 1, 0, 1)),
        ),
    )


@pytest.fixture
def binary_search_instance() -> Instance:
    """Four uniform hypotheses, only the two balanced unit-cost questions."""
    return Instance(
        hypotheses=("a", "b", "c", "d"),
        prior=Prior.uniform(4),
        questions=(
            Question("hi", 1.0, (0, 0, 1, 1)),
            Question("lo", 1.0, (0, 1, 0, 1)),
        ),
    )


@pytest.fixture
def isolator_instance() -> Instance:
    """Three uniform hypotheses, three unit-cost questions isolating one each."""
    return Instance(
        hypotheses=("x", "y", "z"),
        prior=Prior.uniform(3),
        questions=(
            Question("is_x", 1.0, (1, 0, 0)),
            Question("is_y", 1.0, (0, 1, 0)),
            Question("is_z", 1.0, (0, 0, 1)),
        ),
    )
