import pytest

from offswitch.cli import main


@pytest.fixture(scope="session")
def figures_dir(tmp_path_factory):
    """One shared default-figures run; acceptance adds its own reruns."""
    out = tmp_path_factory.mktemp("figures") / "run_a"
    assert main(["figures", "--outdir", str(out)]) == 0
    return out
