from rest_framework import serializers

from .analysis import ExpectationKind
from .densities import DensityKind

DENSITIES = [kind.value for kind in DensityKind]


class DensityQuerySerializer(serializers.Serializer):
    which = serializers.ChoiceField(choices=DENSITIES)
    param = serializers.FloatField(min_value=0.0, max_value=1.0)
    grid = serializers.IntegerField(min_value=1, max_value=100000, default=100)


class ExpectationQuerySerializer(serializers.Serializer):
    which = serializers.ChoiceField(choices=[kind.value for kind in ExpectationKind])
    s = serializers.FloatField(min_value=0.0, max_value=1.0)


class ExtremaQuerySerializer(serializers.Serializer):
    which = serializers.ChoiceField(choices=DENSITIES)
    param = serializers.FloatField(min_value=0.0, max_value=1.0)
