from pathlib import Path

import pytest

from respos.corpus import builtin

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN


def by_labels(A, *labels):
    return [A.index(l) for l in labels]


@pytest.fixture(params=["fig1", "fig2", "chain4", "z2", "bool2", "pz2"])
def builtin_structure(request):
    return builtin(request.param)


def same_by_labels(A, B) -> bool:
    """Order and all three tables agree once elements are matched by label."""
    if sorted(A.labels) != sorted(B.labels):
        return False
    m = [B.index(l) for l in A.labels]
    for x in range(A.size):
        for y in range(A.size):
            if A.leq[x][y] != B.leq[m[x]][m[y]]:
                return False
            for ta, tb in ((A.mul, B.mul), (A.ld, B.ld), (A.rd, B.rd)):
                if m[ta[x][y]] != tb[m[x]][m[y]]:
                    return False
    return True
