"""
Serializers for the verification commands
"""
from fractions import Fraction

from django.conf import settings
from rest_framework import serializers
from sympy import isprime

from bounds.qbound import SETTINGS
from groups.exceptions import CaseError
from groups.unitary import parse_case

STATUSES = ('pass', 'fail', 'skipped-out-of-scale')

POINT_ARITY = {'c1': 3, 'c3': 2, 'psl27': 1, 'psl29': 1}


class RationalField(serializers.Field):
    """Exact rationals as "num/den" strings; integers stay integers."""

    default_error_messages = {
        'invalid': 'Expected a rational written as "num/den".',
    }

    def to_representation(self, value):
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f'{value.numerator}/{value.denominator}'

    def to_internal_value(self, data):
        try:
            return Fraction(str(data))
        except (ValueError, ZeroDivisionError):
            self.fail('invalid')


def plain(value):
    """Payload values as JSON-ready data, rationals as strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return RationalField().to_representation(value)
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, float):
        raise TypeError('floats are not allowed in reports')
    return int(value)


class PayloadField(serializers.Field):
    def to_representation(self, value):
        return plain(value)

    def to_internal_value(self, data):
        return data


class CheckSerializer(serializers.Serializer):
    """One check of a report"""
    name = serializers.CharField()
    status = serializers.ChoiceField(choices=STATUSES)
    payload = PayloadField()


class ReportSerializer(serializers.Serializer):
    """A whole verification report"""
    tool_version = serializers.CharField()
    config = PayloadField()
    checks = CheckSerializer(many=True)
    wall_time = serializers.FloatField()


class RunConfigSerializer(serializers.Serializer):
    """Options shared by all verification commands"""

    jobs = serializers.IntegerField(
        min_value=1, required=False, allow_null=True,
        help_text="Worker pool width",
    )
    out = serializers.CharField(
        required=False, allow_null=True, allow_blank=False,
        help_text="Report path; stdout when absent",
    )

    # jobs and out do not change a report's content
    ECHO_EXCLUDE = ('jobs', 'out')

    def validate_jobs(self, value):
        return settings.SAXL_JOBS if value is None else value

    def echo(self):
        return {key: value for key, value in self.validated_data.items()
                if key not in self.ECHO_EXCLUDE}


class FieldConfigSerializer(RunConfigSerializer):
    """q = p^m"""

    p = serializers.IntegerField(min_value=2, help_text="Characteristic")
    m = serializers.IntegerField(min_value=1, default=1,
                                 help_text="Degree of F_q over F_p")
    cap = serializers.IntegerField(
        min_value=1, required=False, allow_null=True,
        help_text="Largest domain or group to enumerate",
    )

    def validate_p(self, value):
        if not isprime(value):
            raise serializers.ValidationError(f'{value} is not prime')
        return value


class VerifyDirectSerializer(FieldConfigSerializer):
    """Options of verify_direct"""

    case = serializers.CharField(help_text="so, sl or subfield:Q'")
    manning = serializers.BooleanField(
        default=False,
        help_text="Compare fixed point counts with the Manning formula",
    )

    def validate_case(self, value):
        try:
            return str(parse_case(value))
        except CaseError as exc:
            raise serializers.ValidationError(str(exc))

    def validate_cap(self, value):
        return settings.SAXL_CAP if value is None else value


class CrosscheckSerializer(FieldConfigSerializer):
    """Options of crosscheck_classes; the census runs in one process"""

    jobs = None

    def validate(self, attrs):
        if attrs['p'] ** attrs['m'] < 3:
            raise serializers.ValidationError('class tables need q >= 3')
        return attrs


class CertifySerializer(RunConfigSerializer):
    """Options of certify_bounds"""

    setting = serializers.ChoiceField(choices=SETTINGS)
    grid_max = serializers.IntegerField(min_value=2, required=False,
                                        allow_null=True)
    points = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(
            min_value=1)),
        required=False, allow_null=True,
        help_text="Explicit parameter points instead of the default grid",
    )

    def validate(self, attrs):
        points = attrs.get('points')
        if points and attrs.get('grid_max') is not None:
            raise serializers.ValidationError(
                'give either explicit points or a grid ceiling')
        arity = POINT_ARITY[attrs['setting']]
        for point in points or ():
            if len(point) != arity:
                raise serializers.ValidationError(
                    f'{attrs["setting"]} points have {arity} coordinates, '
                    f'got {point}')
        return attrs
