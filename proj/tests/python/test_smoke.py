import json
import random

import numpy as np
import pytest

import embedlab

DEFINITIONS = """[analogy pairs]
a0, b0
a1, b1
a2, b2

[intrusion a-cluster]
triple: a0,a1,a2
d1: b0,b1,b2,b3,b4
d2: b5,f0,f1,b3,b4
d3: f0,f1,f2,b0,b1
d4: b2,b3,b4,b5,f2
"""


def planted(n=1500, seed=3):
    rng = random.Random(seed)
    a = [f"a{i}" for i in range(6)]
    b = [f"b{i}" for i in range(6)]
    f = [f"f{i}" for i in range(3)]
    out = []
    for _ in range(n):
        cluster = rng.choice([a, b])
        out.append([rng.choice(cluster) if rng.random() < 0.7 else rng.choice(f) for _ in range(rng.randint(8, 15))])
    return out


@pytest.fixture(scope="module")
def sentences():
    return planted()


@pytest.fixture(scope="module")
def model(sentences):
    cfg = embedlab.TrainingConfig()
    cfg.algorithm = "sg"
    cfg.dims = 16
    cfg.epochs = 3
    cfg.min_count = 1
    cfg.seed = 5
    return embedlab.train(sentences, cfg)


def test_tokenize_and_corpus(tmp_path):
    assert embedlab.tokenize("Ned Stark, Lord of Winterfell.", lowercase=True) == ["ned", "stark", "lord", "of", "winterfell"]
    raw = tmp_path / "raw.txt"
    raw.write_text("Jon went north. Arya went south!\n", encoding="utf-8")
    corpus = embedlab.load_corpus(raw)
    assert len(corpus) == 2
    assert corpus.token_count == 6
    raw.write_bytes(b"bad \xff byte")
    with pytest.raises(embedlab.DecodeError):
        embedlab.load_corpus(raw)


def test_config_and_presets():
    cfg = embedlab.preset("w2v-ww12-i15-hs")
    assert cfg.window == 12 and cfg.epochs == 15 and cfg.loss == "hierarchical-softmax"
    assert "w2v-default" in embedlab.preset_names()
    assert embedlab.TrainingConfig.from_json(cfg.to_json()) == cfg
    with pytest.raises(embedlab.UsageError):
        embedlab.preset("nope")
    bad = embedlab.TrainingConfig()
    bad.dims = 0
    with pytest.raises(embedlab.ConfigError):
        bad.validate()


def test_train_and_query(model):
    assert model.kind == "dense"
    assert model.dims == 16
    assert model.vectors.shape == (len(model), 16)
    assert model.vectors.dtype == np.float32
    assert model.similarity("a0", "a1") > model.similarity("a0", "b0")
    hits = model.neighbors("a0")
    assert len(hits) == 10 and all(t != "a0" for t, _ in hits)
    assert model.find_intruder(["a0", "a1", "a2", "b0"]) == "b0"
    with pytest.raises(embedlab.LookupError):
        model.vector("dragon")
    assert model.find_intruder(["a0", "a1", "a2", "dragon"]) is None


def test_save_load_round_trip(model, tmp_path):
    model.save(tmp_path / "m.bin")
    back = embedlab.load_model(tmp_path / "m.bin")
    assert back.terms == model.terms
    assert np.array_equal(back.vectors, model.vectors)
    assert back.config == model.config
    model.save(tmp_path / "m.txt")
    assert embedlab.load_model(tmp_path / "m.txt").vectors.shape == model.vectors.shape
    with pytest.raises(embedlab.IoError):
        embedlab.load_model(tmp_path / "absent.bin")


def test_ppmi(sentences, tmp_path):
    ppmi = embedlab.train_ppmi(sentences, min_count=1, window=2)
    assert ppmi.kind == "ppmi"
    assert ppmi.dims is None
    assert ppmi.similarity("a0", "a1") > ppmi.similarity("a0", "b0")
    ppmi.save(tmp_path / "m.ppmi")
    assert embedlab.load_model(tmp_path / "m.ppmi").kind == "ppmi"


def test_generate_and_evaluate(model, tmp_path):
    intrusion = embedlab.generate_dataset(DEFINITIONS, "intrusion")
    assert len([l for l in intrusion.splitlines() if l and not l.startswith(":")]) == 20
    (tmp_path / "intr.txt").write_text(intrusion)
    report = embedlab.evaluate(model, tmp_path / "intr.txt", "intrusion", model_id="sg")
    assert report.total["attempted"] == 20
    assert report.random_baseline == 0.25
    assert set(report.by_difficulty) == {1, 2, 3, 4}
    assert 0.0 <= report.accuracy <= 1.0
    assert json.loads(report.summary_json())["total"]["attempted"] == 20
    assert report.render("csv").splitlines()[0].startswith("section,difficulty")

    (tmp_path / "ana.txt").write_text(embedlab.generate_dataset(DEFINITIONS, "analogies"))
    reports = [embedlab.evaluate(model, tmp_path / "ana.txt", "analogy", method=m) for m in ("offset", "only-b")]
    assert len(reports[0].records) == 6
    assert "Total" in embedlab.comparison_table(reports)

    with pytest.raises(embedlab.DefinitionError):
        embedlab.generate_dataset("[analogy s]\nonly-one\n", "analogies")
