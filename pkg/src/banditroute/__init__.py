"""Cost-aware query routing with a contextual bandit.

A router learns online which retrieval strategy (answer directly,
retrieve once, or retrieve iteratively) to use per query, trading answer
quality against retrieval cost. Comparison baselines, QA metrics,
synthetic environments, and a CLI round out the toolkit.
"""

from .bandit import (
    BanditRouter,
    LinearPolicy,
    TrainConfig,
    predict_scores,
    select_arm,
    train,
)
from .baselines import (
    MULTI_LABEL,
    SINGLE_LABEL,
    ClassifierModel,
    ClassifierRouter,
    ClassifierTrainConfig,
    derive_multi_labels,
    derive_single_label,
    predict_arm,
    train_classifier,
)
from .config import (
    CLASSIFIER_SEED_OFFSET,
    ENV_SEED_OFFSET,
    EVAL_ENV_SEED_OFFSET,
    EnvironmentConfig,
    RunConfig,
    TRAIN_SEED_OFFSET,
    derive_seed,
    eval_dataset,
    load_run_config,
    make_classifier_config,
    make_train_config,
    parse_synthetic_spec,
    train_dataset,
)
from .env import (
    ArmBehavior,
    ClassSpec,
    ConstantSteps,
    ReplayDataset,
    SyntheticEnvSpec,
    UniformSteps,
    execute,
    generate,
    oracle_best_arm,
    regret,
    strict_failure_reward,
)
from .exceptions import (
    BanditRouteError,
    ConfigurationError,
    DataFormatError,
    EmptyTrainingSetError,
    MissingEntryError,
    NumericError,
)
from .featurize import (
    EmbeddingTable,
    HashingQueryFeaturizer,
    QueryFeaturizer,
    featurizer_from_config,
    fnv1a_64,
    hash_features,
    load_embeddings,
    save_embeddings,
    tokenize,
)
from .metrics import EvalReport, acc_contains, aggregate, em, f1, normalize_answer
from .policies import (
    ClassifierArmPolicy,
    FixedArmPolicy,
    GreedyBanditPolicy,
    OracleArmPolicy,
    RolloutResult,
    rollout,
)
from .reward import (
    FormulaReward,
    RewardScheme,
    StepFraction,
    TabularReward,
    compute_reward,
    preset,
    scheme_from_config,
    scheme_to_config,
)
from .serialize import (
    Checkpoint,
    load_checkpoint,
    load_dataset,
    load_episode_log,
    make_checkpoint,
    save_checkpoint,
    save_dataset,
    save_episode_log,
)
from .types import (
    DEFAULT_ARM_NAMES,
    Arm,
    ArmOutcome,
    ArmSet,
    EpisodeRecord,
    Query,
    default_arm_set,
)

__version__ = "0.1.0"

__all__ = [
    "Arm",
    "ArmBehavior",
    "ArmOutcome",
    "ArmSet",
    "BanditRouteError",
    "BanditRouter",
    "CLASSIFIER_SEED_OFFSET",
    "Checkpoint",
    "ClassSpec",
    "ClassifierArmPolicy",
    "ClassifierModel",
    "ClassifierRouter",
    "ClassifierTrainConfig",
    "ConfigurationError",
    "ConstantSteps",
    "DEFAULT_ARM_NAMES",
    "DataFormatError",
    "ENV_SEED_OFFSET",
    "EVAL_ENV_SEED_OFFSET",
    "EmbeddingTable",
    "EmptyTrainingSetError",
    "EnvironmentConfig",
    "EpisodeRecord",
    "EvalReport",
    "FixedArmPolicy",
    "FormulaReward",
    "GreedyBanditPolicy",
    "HashingQueryFeaturizer",
    "LinearPolicy",
    "MULTI_LABEL",
    "MissingEntryError",
    "NumericError",
    "OracleArmPolicy",
    "Query",
    "QueryFeaturizer",
    "ReplayDataset",
    "RewardScheme",
    "RolloutResult",
    "RunConfig",
    "SINGLE_LABEL",
    "StepFraction",
    "SyntheticEnvSpec",
    "TRAIN_SEED_OFFSET",
    "TabularReward",
    "TrainConfig",
    "UniformSteps",
    "acc_contains",
    "aggregate",
    "compute_reward",
    "default_arm_set",
    "derive_multi_labels",
    "derive_seed",
    "derive_single_label",
    "em",
    "eval_dataset",
    "execute",
    "f1",
    "featurizer_from_config",
    "fnv1a_64",
    "generate",
    "hash_features",
    "load_checkpoint",
    "load_dataset",
    "load_embeddings",
    "load_episode_log",
    "load_run_config",
    "make_checkpoint",
    "make_classifier_config",
    "make_train_config",
    "normalize_answer",
    "oracle_best_arm",
    "parse_synthetic_spec",
    "predict_arm",
    "predict_scores",
    "preset",
    "regret",
    "rollout",
    "save_checkpoint",
    "save_dataset",
    "save_embeddings",
    "save_episode_log",
    "scheme_from_config",
    "scheme_to_config",
    "select_arm",
    "strict_failure_reward",
    "tokenize",
    "train",
    "train_classifier",
    "train_dataset",
]
