import pytest

from convedit.errors import InvalidInputError
from convedit.tokens import SEP_TEXT, Segment, concat_turns


def test_concat_with_context():
    seq = concat_turns(["Play", "some", "jazz"], ["in", "my", "living", "room"])
    assert seq.T == 8
    assert seq.texts() == ["Play", "some", "jazz", SEP_TEXT, "in", "my", "living", "room"]
    assert seq.sep_index == 3
    assert [c.id for c in seq] == list(range(8))
    assert seq.context_tokens() == ["Play", "some", "jazz"]
    assert seq.followup_tokens() == ["in", "my", "living", "room"]


def test_concat_without_context_has_no_sep():
    seq = concat_turns([], ["Who", "plays", "uh", "sings", "this"])
    assert seq.sep_index is None
    assert all(c.segment is Segment.FOLLOWUP for c in seq)


def test_empty_followup_rejected():
    with pytest.raises(InvalidInputError):
        concat_turns(["Play", "jazz"], [])


@pytest.mark.parametrize("bad", ["", "two words", "tab\tchar"])
def test_whitespace_tokens_rejected(bad):
    with pytest.raises(InvalidInputError):
        concat_turns([], ["fine", bad])


def test_cell_ids_are_stable_under_copy():
    seq = concat_turns(["a"], ["b"])
    clone = seq.cells[2].copy()
    clone.deleted = True
    assert clone.id == seq.cells[2].id
    assert not seq.cells[2].deleted
