from django.db import models


class NonlinearityKind(models.TextChoices):
    ZERO = "zero", "Zero"
    POWER = "power", "Power"


class Regime(models.TextChoices):
    SUPERLINEAR = "superlinear", "p-superlinear"
    SUBLINEAR = "sublinear", "p-sublinear"
    ZERO = "zero", "Zero nonlinearity"
    SUPERCRITICAL = "supercritical", "At or beyond the critical exponent"
    BORDERLINE = "borderline", "Exponent equal to p"
