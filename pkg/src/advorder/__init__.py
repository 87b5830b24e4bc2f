"""advorder: curate adversarially ordered natural datasets from noisy
labeling functions.

The pipeline prunes dependent labeling functions, combines the rest
into probabilistic labels, bounds each label's unknown true confidence
with a Clopper-Pearson interval, orders samples by the interval lower
bound, and slices the ordering into nested datasets whose weak-label
accuracy should fall -- a property checked with Spearman rank
statistics when ground truth is available.
"""

from .curation import CuratedSequence, curate, order_samples, prefix_sizes
from .intervals import (
    ConfidenceInterval,
    clopper_pearson,
    intervals_for_matrix,
    success_mass,
    vote_count,
)
from .kernels import (
    ConvergenceError,
    beta_quantile,
    pearson,
    regularized_incomplete_beta,
    student_t_two_sided_p,
)
from .labeling import (
    ProbabilisticLabel,
    WeightVector,
    combine,
    combine_matrix,
    fit_generative_weights,
    majority_weights,
)
from .matrix import (
    GroundTruth,
    LabelMatrix,
    MatrixFormatError,
    coverage,
    load_corpus,
    load_ground_truth,
    load_label_matrix,
)
from .pipeline import (
    ComparativeTable,
    PipelineConfig,
    PipelineResult,
    run_comparatives,
    run_pipeline,
    write_artifacts,
)
from .pruning import (
    DependencyGraph,
    LFRanking,
    build_dependency_graph,
    correlation_matrix,
    maximal_cliques,
    prune,
    rank_lfs,
)
from .synth import LFSpec, SynthConfig, demo_config, generate
from .validation import (
    INVALID,
    VALID_ADVERSARIAL,
    ValidationReport,
    accuracy,
    binomial_ci_halfwidth,
    rank_corr_pvalue,
    spearman,
    validate_sequence,
    validity_verdict,
)

__version__ = "0.1.0"
