from dualbasis.verification.harness import (
    Family,
    TrialConfig,
    check_configuration,
    evaluate_trial,
    replay_trial,
    verify_identities,
)
from dualbasis.verification.random import (
    GENERATOR_NAME,
    Stream,
    philox_generator,
    random_basis,
    random_degenerate_pair_2d,
    random_orthonormal_basis,
)
from dualbasis.verification.report import IdentityRecord, VerificationReport
