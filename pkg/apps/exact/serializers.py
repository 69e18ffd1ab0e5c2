from rest_framework import serializers

from .formulas import METHODS


class MarginalQuerySerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=['card', 'pos'])
    n = serializers.IntegerField(min_value=1)
    j = serializers.IntegerField(min_value=1, required=False)
    a = serializers.IntegerField(min_value=1, required=False)
    method = serializers.ChoiceField(choices=METHODS, default='hockey')

    def validate(self, data):
        if ('j' in data) != ('a' in data):
            raise serializers.ValidationError("j and a must be given together")
        for name in ('j', 'a'):
            if name in data and data[name] > data['n']:
                raise serializers.ValidationError({name: f"Must not exceed n={data['n']}"})
        return data
