import pytest

from veronalt.identities import ALTERNATIVE, ASSOCIATIVE, NONASSOC_FREE, RIGHT_ALTERNATIVE, load_identity_file, variety
from veronalt.engine import quotient_dim


def test_builtins():
    assert variety("alt") is ALTERNATIVE
    assert ASSOCIATIVE.min_degree == 3
    assert NONASSOC_FREE.multilinear == []
    # alternative laws linearize to two independent multilinear identities
    assert len(ALTERNATIVE.multilinear) == 2
    assert len(RIGHT_ALTERNATIVE.multilinear) == 1


def test_unknown_variety():
    with pytest.raises(ValueError, match="unknown variety"):
        variety("jordan")


def test_custom_file_matches_builtin(tmp_path):
    f = tmp_path / "alt.txt"
    f.write_text("# alternative laws\nassoc(a,a,b)\n\nassoc(b,a,a)\n")
    ids = load_identity_file(f)
    assert len(ids.multilinear) == 2
    for m in [(2, 1), (1, 1, 1), (2, 2)]:
        assert quotient_dim(ids, len(m), m) == quotient_dim(ALTERNATIVE, len(m), m)


def test_custom_file_parse_error(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("assoc(a,b\n")
    with pytest.raises(ValueError, match="bad.txt:1"):
        load_identity_file(f)


def test_signature_distinguishes_sets():
    assert ALTERNATIVE.signature() != RIGHT_ALTERNATIVE.signature()
