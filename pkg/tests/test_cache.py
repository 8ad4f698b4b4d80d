from src.utils.cache import get_cache, memoized

calls = []


@memoized("test/square")
def square(x):
    calls.append(x)
    return x * x


def test_memoized_calls_once():
    calls.clear()
    get_cache().clear()
    assert square(7) == 49
    assert square(7) == 49
    assert calls == [7]


def test_uncached_bypasses_cache():
    calls.clear()
    assert square.uncached(5) == 25
    assert square.uncached(5) == 25
    assert calls == [5, 5]


def test_keyword_arguments_are_part_of_key():
    @memoized("test/power")
    def power(x, exponent=2):
        return x ** exponent

    assert power(2) == 4
    assert power(2, exponent=3) == 8
