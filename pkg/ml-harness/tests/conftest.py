import subprocess

import pytest


def generate_dataset(out_dir, function, n_bit, p, n_train, n_val, seed):
    """Produce a dataset directory via the generator CLI (the file interface)."""
    subprocess.run(
        [
            "noisybool", "gen-data",
            "--function", function,
            "--n-bit", str(n_bit),
            "--p", str(p),
            "--n-train", str(n_train),
            "--n-val", str(n_val),
            "--seed", str(seed),
            "--out-dir", str(out_dir),
        ],
        check=True,
        capture_output=True,
    )
    return out_dir


@pytest.fixture(scope="session")
def parity4_dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("parity4")
    return generate_dataset(out, "parity:4", 5, 0.1, 200, 100, 5)
