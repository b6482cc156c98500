import pandas as pd

import run
from config import Config


def test_study_runner_writes_both_families(tmp_path, monkeypatch):
    monkeypatch.setattr(Config, "DATA_DIR", str(tmp_path))
    monkeypatch.setattr(Config, "POINTS", 31)
    run.main()

    s3m3 = pd.read_csv(tmp_path / "compare_S3M3.csv", comment="#", dtype=str, keep_default_na=False)
    s3m4 = pd.read_csv(tmp_path / "compare_S3M4.csv", comment="#", dtype=str, keep_default_na=False)
    assert sorted(s3m3["label"]) == sorted(f"{s}oo3/{m}oo3" for s in (1, 2, 3) for m in (1, 2, 3))
    assert sorted(s3m4["label"]) == sorted(f"{s}oo3/{m}oo4" for s in (1, 2, 3) for m in (1, 2, 3, 4))
    assert set(s3m3["reference"]) == {"false"}

    for name in ("S3M3", "S3M4"):
        svg = (tmp_path / f"compare_{name}.svg").read_text(encoding="utf-8")
        assert "<svg" in svg
