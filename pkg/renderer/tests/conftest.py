import subprocess
import sys

import pytest


@pytest.fixture(scope="session")
def artifacts_dir(tmp_path_factory):
    """The seven standard CSVs, produced through the upstream CLI."""
    outdir = tmp_path_factory.mktemp("artifacts")
    subprocess.run(
        [sys.executable, "-m", "offswitch.cli", "figures", "--outdir", str(outdir)],
        check=True,
    )
    return outdir
