"""Online submodular secretary selection under a cardinality constraint."""
from .algorithm import (COMPETITIVE_RATIO, OptResult, RunResult, brute_force_opt,
                        expected_segment_hits, offline_greedy, run_submodular_secretary)
from .arrivals import (ArrivalSchedule, Segment, partition_segments, rescale_local_times,
                       sample_schedule)
from .errors import (DegenerateInstanceError, InstanceFormatError, InvalidSetError,
                     InvalidStreamError, ParameterError, SizeLimitError, SubsecError)
from .harness import (ExperimentConfig, Report, estimate_competitive_ratio, run_experiment,
                      verify_bounded_sampling_lemma, verify_sampling_lemma, write_csv)
from .kernels import BACKEND
from .oracles import (CoverageOracle, CutOracle, FunctionOracle, ModularOracle, ShiftedOracle,
                      ValueOracle, evaluate, marginal_gain, sample_random_instance,
                      verify_nonnegative, verify_submodular)
from .secretary import (SecretaryOutcome, WeightedStream, run_modified_secretary,
                        selection_probability_profile)

__version__ = "0.1.0"
