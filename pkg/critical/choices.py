from django.db import models


class CriticalKind(models.TextChoices):
    MOUNTAIN_PASS = "mountain_pass", "Mountain pass"
    MINIMIZER = "minimizer", "Global minimizer"
    FOUNTAIN = "fountain", "Fountain"
    DUAL_FOUNTAIN = "dual_fountain", "Dual fountain"
    CONSTANT_BRANCH = "constant_branch", "Constant branch"
    BRANCH = "branch", "Single-mode branch"


class SolverKind(models.TextChoices):
    MOUNTAIN_PASS = "mountain_pass", "Mountain pass"
    MINIMIZE = "minimize", "Global minimization"
    FOUNTAIN = "fountain", "Fountain sweep"
    DUAL_FOUNTAIN = "dual_fountain", "Dual fountain sweep"
