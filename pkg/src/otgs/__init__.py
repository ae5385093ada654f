"""Supervised graph summarization by optimal transport."""

__version__ = "0.1.0"

from .compress import CompressionResult, exhaustive_compress, ot_compress
from .constructions import (
    EdgeBernoulliModel, OracleResult, infomax_oracle, make_clique_gadget, make_monotonicity_gadget,
    monotonicity_certificate, sample_dataset, subset_mi_exact,
)
from .datasets import LabeledDataset, SyntheticSpec, gen_synthetic, grid_graph_from_image, read_dataset, write_dataset
from .errors import (
    CostOverflowError, DatasetFormatError, InfeasibleError, InstanceTooLargeError, OTGSError, ValidationError,
)
from .evaluation import classify_cv, fit_summarizer, run_experiment, summarize_testset
from .flow import TransportSolution, constrained_transport, wasserstein
from .graph import Graph, flow_cost, flow_result, incidence_matrix
from .info import (
    MiEstimate, binary_entropy, conditional_mi, exact_edge_mi, kl_bernoulli, kl_bernoulli_edge, mi_continuous,
    mi_discrete,
)
from .params import ParamPair, apply_sensitivity_filter, sensitivity_scores, supervised_params, unsupervised_params
