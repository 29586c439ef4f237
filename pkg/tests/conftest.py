import sys
from pathlib import Path

from hypothesis import settings, strategies as st

from hof.gen import GenConfig, Generator
from hof.ty import Arrow, N, Prod

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

types = st.recursive(
    st.just(N),
    lambda inner: st.builds(Arrow, inner, inner) | st.builds(Prod, inner, inner),
    max_leaves=12,
)


@st.composite
def programs(draw, max_depth=4, max_count=5):
    """Closed well-typed programs of type N, via the seeded generator."""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return Generator(seed, GenConfig(max_depth, max_count)).program()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
