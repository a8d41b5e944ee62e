"""
Serializers for the JSON documents written by the management commands.
"""
from rest_framework import serializers

COMMANDS = ('generate', 'zscan', 'fit', 'lyapunov', 'mc', 'tm_bounds')


class RunConfigSerializer(serializers.Serializer):
    """A replayable run: command name plus its validated options."""
    command = serializers.ChoiceField(choices=COMMANDS)
    options = serializers.DictField()

    def validate_options(self, value):
        if 'record' in value:
            raise serializers.ValidationError("run configs never carry the record flag")
        return value


class ScanSampleSerializer(serializers.Serializer):
    level = serializers.IntegerField()
    k = serializers.FloatField()
    log_k = serializers.FloatField()
    log_Z = serializers.FloatField()


class ScanSerializer(serializers.Serializer):
    producer = serializers.CharField()
    ratio = serializers.FloatField()
    k0 = serializers.FloatField()
    depth = serializers.IntegerField()
    samples = ScanSampleSerializer(many=True)

    def to_representation(self, instance):
        samples = [
            {'level': level, 'k': float(instance.k[level]), 'log_k': float(log_k), 'log_Z': float(log_z)}
            for level, (log_k, log_z) in enumerate(zip(instance.log_k, instance.log_z))
        ]
        return super().to_representation({
            'producer': instance.producer, 'ratio': instance.ratio, 'k0': instance.k0,
            'depth': instance.depth, 'samples': samples,
        })


class ScalingRowSerializer(serializers.Serializer):
    system = serializers.CharField()
    model = serializers.CharField()
    measured = serializers.FloatField()
    predicted = serializers.FloatField(allow_null=True)
    tol = serializers.FloatField(allow_null=True)
    passed = serializers.BooleanField(allow_null=True)
    label = serializers.CharField()
    spread = serializers.FloatField(allow_null=True)
    max_residual = serializers.FloatField(allow_null=True)
    samples = serializers.IntegerField()


class ScalingReportSerializer(serializers.Serializer):
    rows = ScalingRowSerializer(many=True)
    all_passed = serializers.BooleanField()


class ExponentReportSerializer(serializers.Serializer):
    rule = serializers.CharField()
    # 'lambda' is a keyword
    pf_eigenvalue = serializers.FloatField(source='lambda')
    det = serializers.IntegerField()
    lyapunov_spectrum = serializers.ListField(child=serializers.FloatField(allow_null=True))
    shifted_spectrum = serializers.ListField(child=serializers.FloatField(allow_null=True))
    alpha_tilde = serializers.FloatField(allow_null=True)
    predicted_exponent = serializers.FloatField(allow_null=True)
    derivation = serializers.CharField()
    candidates = serializers.ListField(child=serializers.FloatField())
    flagged = serializers.BooleanField()
    note = serializers.CharField(allow_blank=True)
    measured_exponent = serializers.FloatField(allow_null=True, required=False)
    measured_spread = serializers.FloatField(allow_null=True, required=False)


class TMBoundSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    lower = serializers.FloatField()
    improved_lower = serializers.FloatField(allow_null=True)
    upper = serializers.FloatField()
    F_est = serializers.FloatField()
    log_lower = serializers.FloatField()
    log_upper = serializers.FloatField()
    log_F_est = serializers.FloatField()


class TMBoundsDocumentSerializer(serializers.Serializer):
    bounds = TMBoundSerializer()
    alpha = serializers.FloatField()
    upper_constant = serializers.FloatField(allow_null=True, required=False)
    lower_constant = serializers.FloatField(allow_null=True, required=False)
    beta = serializers.FloatField(allow_null=True, required=False)
    prefactor_exponent = serializers.FloatField(allow_null=True, required=False)


class McRowSerializer(serializers.Serializer):
    k = serializers.FloatField()
    Z_analytic = serializers.FloatField()
    Z_empirical = serializers.FloatField()
    stderr = serializers.FloatField()
    bins = serializers.IntegerField()


class McDocumentSerializer(serializers.Serializer):
    model = serializers.CharField()
    R = serializers.FloatField()
    seed = serializers.IntegerField(allow_null=True)
    points = serializers.IntegerField()
    rows = McRowSerializer(many=True)
