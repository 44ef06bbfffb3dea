import json

import pytest

from banditroute import (
    CLASSIFIER_SEED_OFFSET,
    ConfigurationError,
    ConstantSteps,
    ENV_SEED_OFFSET,
    EVAL_ENV_SEED_OFFSET,
    TRAIN_SEED_OFFSET,
    UniformSteps,
    derive_seed,
    eval_dataset,
    generate,
    load_run_config,
    make_classifier_config,
    make_train_config,
    parse_synthetic_spec,
    save_dataset,
    train_dataset,
)

SYNTH = {
    "classes": [
        {
            "name": "a",
            "weight": 1.0,
            "arms": [
                {"p_correct": 0.9, "steps": 0},
                {"p_correct": 0.5, "steps": 1},
                {"p_correct": 0.7, "steps": [2, 5]},
            ],
        }
    ]
}


def write_config(tmp_path, obj, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


def minimal(seed=7):
    # deep-copied so tests can mutate their config freely
    synth = json.loads(json.dumps(SYNTH))
    return {"seed": seed, "environment": {"synthetic": synth, "n": 20, "eval_n": 10}}


class TestSeeds:
    def test_offsets_are_distinct(self):
        offsets = {
            ENV_SEED_OFFSET,
            TRAIN_SEED_OFFSET,
            CLASSIFIER_SEED_OFFSET,
            EVAL_ENV_SEED_OFFSET,
        }
        assert len(offsets) == 4

    def test_derive_seed_wraps(self):
        assert derive_seed(2**64 - 1, 2) == 1

    def test_config_seed_properties(self, tmp_path):
        config = load_run_config(write_config(tmp_path, minimal(seed=1000)))
        assert config.env_seed == 1000 + ENV_SEED_OFFSET
        assert config.train_seed == 1000 + TRAIN_SEED_OFFSET
        assert config.classifier_seed == 1000 + CLASSIFIER_SEED_OFFSET
        assert config.eval_env_seed == 1000 + EVAL_ENV_SEED_OFFSET

    def test_seed_required(self, tmp_path):
        obj = minimal()
        del obj["seed"]
        path = write_config(tmp_path, obj)
        with pytest.raises(ConfigurationError, match="seed"):
            load_run_config(path)

    def test_seed_override_wins(self, tmp_path):
        path = write_config(tmp_path, minimal(seed=5))
        assert load_run_config(path, seed_override=99).seed == 99
        assert load_run_config(path).seed == 5

    def test_override_supplies_missing_seed(self, tmp_path):
        obj = minimal()
        del obj["seed"]
        path = write_config(tmp_path, obj)
        assert load_run_config(path, seed_override=3).seed == 3

    def test_bool_seed_rejected(self, tmp_path):
        obj = minimal()
        obj["seed"] = True
        with pytest.raises(ConfigurationError):
            load_run_config(write_config(tmp_path, obj))


class TestStrictKeys:
    def test_unknown_top_level_key(self, tmp_path):
        obj = minimal()
        obj["rewards"] = "single-hop"
        with pytest.raises(ConfigurationError, match="unknown keys"):
            load_run_config(write_config(tmp_path, obj))

    def test_unknown_env_key(self, tmp_path):
        obj = minimal()
        obj["environment"]["size"] = 10
        with pytest.raises(ConfigurationError, match="unknown keys"):
            load_run_config(write_config(tmp_path, obj))

    def test_unknown_train_key(self, tmp_path):
        obj = minimal()
        obj["train"] = {"learning_rate": 0.1}
        with pytest.raises(ConfigurationError, match="unknown keys"):
            load_run_config(write_config(tmp_path, obj))

    def test_unknown_class_key(self, tmp_path):
        obj = minimal()
        obj["environment"]["synthetic"]["classes"][0]["probability"] = 0.5
        with pytest.raises(ConfigurationError, match="unknown keys"):
            load_run_config(write_config(tmp_path, obj))

    def test_unknown_behavior_key(self, tmp_path):
        obj = minimal()
        obj["environment"]["synthetic"]["classes"][0]["arms"][0]["cost"] = 3
        with pytest.raises(ConfigurationError, match="unknown keys"):
            load_run_config(write_config(tmp_path, obj))

    def test_unknown_evaluate_key(self, tmp_path):
        obj = minimal()
        obj["evaluate"] = {"mode": "strict"}
        with pytest.raises(ConfigurationError, match="unknown keys"):
            load_run_config(write_config(tmp_path, obj))


class TestEnvironmentSection:
    def test_synthetic_and_replay_exclusive(self, tmp_path):
        obj = minimal()
        obj["environment"]["replay"] = "data.jsonl"
        with pytest.raises(ConfigurationError, match="exactly one"):
            load_run_config(write_config(tmp_path, obj))

    def test_neither_rejected(self, tmp_path):
        obj = {"seed": 1, "environment": {"n": 5}}
        with pytest.raises(ConfigurationError, match="exactly one"):
            load_run_config(write_config(tmp_path, obj))

    def test_environment_required(self, tmp_path):
        with pytest.raises(ConfigurationError, match="environment"):
            load_run_config(write_config(tmp_path, {"seed": 1}))

    def test_replay_path_resolved_relative_to_config(self, tmp_path):
        spec = parse_synthetic_spec(SYNTH)
        save_dataset(generate(spec, seed=0, n=3), str(tmp_path / "d.jsonl"))
        sub = tmp_path / "configs"
        sub.mkdir()
        config = load_run_config(
            write_config(sub, {"seed": 1, "environment": {"replay": "../d.jsonl"}})
        )
        assert config.environment.replay_path == str(sub / ".." / "d.jsonl")
        assert len(train_dataset(config)) == 3

    def test_missing_replay_file_rejected(self, tmp_path):
        obj = {"seed": 1, "environment": {"replay": "absent.jsonl"}}
        with pytest.raises(ConfigurationError, match="not found"):
            load_run_config(write_config(tmp_path, obj))

    def test_replay_roundtrip_through_datasets(self, tmp_path):
        spec = parse_synthetic_spec(SYNTH)
        original = generate(spec, seed=0, n=4)
        save_dataset(original, str(tmp_path / "d.jsonl"))
        config = load_run_config(
            write_config(tmp_path, {"seed": 1, "environment": {"replay": "d.jsonl"}})
        )
        assert train_dataset(config).queries == original.queries
        # no eval_replay: evaluation falls back to the training file
        assert eval_dataset(config).queries == original.queries

    def test_synthetic_datasets_use_offset_seeds(self, tmp_path):
        config = load_run_config(write_config(tmp_path, minimal(seed=50)))
        spec = config.environment.synthetic
        assert train_dataset(config).queries == generate(
            spec, 50 + ENV_SEED_OFFSET, 20
        ).queries
        assert eval_dataset(config).queries == generate(
            spec, 50 + EVAL_ENV_SEED_OFFSET, 10
        ).queries

    def test_default_sizes(self, tmp_path):
        obj = {"seed": 1, "environment": {"synthetic": SYNTH}}
        config = load_run_config(write_config(tmp_path, obj))
        assert config.environment.n == 2000
        assert config.environment.eval_n == 500


class TestStepLawParsing:
    def test_int_becomes_constant(self):
        spec = parse_synthetic_spec(SYNTH)
        behaviors = spec.classes[0].behaviors
        assert behaviors[0].step_law == ConstantSteps(0)
        assert behaviors[1].step_law == ConstantSteps(1)

    def test_pair_becomes_uniform(self):
        spec = parse_synthetic_spec(SYNTH)
        assert spec.classes[0].behaviors[2].step_law == UniformSteps(2, 5)

    def test_bool_steps_rejected(self):
        bad = json.loads(json.dumps(SYNTH))
        bad["classes"][0]["arms"][0]["steps"] = True
        with pytest.raises(ConfigurationError, match="steps"):
            parse_synthetic_spec(bad)

    def test_triple_rejected(self):
        bad = json.loads(json.dumps(SYNTH))
        bad["classes"][0]["arms"][2]["steps"] = [1, 2, 3]
        with pytest.raises(ConfigurationError, match="steps"):
            parse_synthetic_spec(bad)

    def test_defaults(self):
        spec = parse_synthetic_spec(SYNTH)
        assert spec.vocab_size == 50
        assert spec.step_cap == 8
        assert spec.overlap == 0.2


class TestSections:
    def test_train_section_defaults(self, tmp_path):
        config = load_run_config(write_config(tmp_path, minimal(seed=9)))
        tc = make_train_config(config)
        assert tc.episodes == 5000
        assert tc.alpha == 5e-2
        assert tc.epsilon == 0.1
        assert tc.seed == 9 + TRAIN_SEED_OFFSET

    def test_train_section_overrides(self, tmp_path):
        obj = minimal(seed=9)
        obj["train"] = {"episodes": 123, "alpha": 0.01, "epsilon": 0.2}
        tc = make_train_config(load_run_config(write_config(tmp_path, obj)))
        assert (tc.episodes, tc.alpha, tc.epsilon) == (123, 0.01, 0.2)

    def test_classifier_defaults(self, tmp_path):
        config = load_run_config(write_config(tmp_path, minimal(seed=9)))
        cc = make_classifier_config(config)
        assert (cc.batch_size, cc.lr, cc.epochs) == (32, 0.1, 50)
        assert cc.seed == 9 + CLASSIFIER_SEED_OFFSET

    def test_default_policies(self, tmp_path):
        config = load_run_config(write_config(tmp_path, minimal()))
        assert config.policies == (
            "bandit",
            "single-label",
            "multi-label",
            "fixed-zero",
            "fixed-one",
            "fixed-multiple",
            "oracle",
        )

    def test_empty_policies_rejected(self, tmp_path):
        obj = minimal()
        obj["policies"] = []
        with pytest.raises(ConfigurationError, match="policies"):
            load_run_config(write_config(tmp_path, obj))

    def test_evaluate_policy_default(self, tmp_path):
        config = load_run_config(write_config(tmp_path, minimal()))
        assert config.evaluate_policy == "checkpoint"

    def test_checkpoint_path_must_exist(self, tmp_path):
        obj = minimal()
        obj["checkpoint"] = "absent.json"
        with pytest.raises(ConfigurationError, match="not found"):
            load_run_config(write_config(tmp_path, obj))

    def test_reward_config_passthrough(self, tmp_path):
        obj = minimal()
        obj["reward"] = "multi-hop"
        config = load_run_config(write_config(tmp_path, obj))
        assert config.reward_config == "multi-hop"

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="invalid JSON"):
            load_run_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="cannot read"):
            load_run_config(str(tmp_path / "absent.json"))
