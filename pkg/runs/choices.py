from django.db import models


class CommandChoices(models.TextChoices):
    SPECTRUM = "spectrum", "Spectrum"
    EIGEN = "eigen", "Eigen"
    SOLVE = "solve", "Solve"
    VERIFY = "verify", "Verify"


class RunStatusChoices(models.TextChoices):
    SUCCEEDED = "succeeded", "Succeeded"
    FAILED = "failed", "Failed"


class SuiteChoices(models.TextChoices):
    CLIFFORD = "clifford", "Clifford relations"
    NORMS = "norms", "Operator and norm identities"
    GRADIENT = "gradient", "Gradient against finite differences"
    MONOTONE = "monotone", "Monotone operator inequality"
    ORACLE = "oracle", "Closed-form oracles"
    ALL = "all", "All suites"


class EigenModeChoices(models.TextChoices):
    MIN = "min", "First eigenvalue"
    SEQUENCE = "sequence", "Eigenvalue sequence"
    TAIL = "tail", "Tail embedding constants"
