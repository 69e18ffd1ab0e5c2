from django.core.exceptions import ValidationError
from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView

from .conf import lab_setting
from .exceptions import ResourceLimitError


class EngineView(APIView):
    """Read-only view over an engine; engine errors become JSON error responses"""
    query_serializer_class = None

    def compute(self, params):
        raise NotImplementedError

    def get(self, request):
        serializer = self.query_serializer_class(data=request.query_params)
        serializer.is_valid(raise_exception=True)
        try:
            return Response(self.compute(serializer.validated_data))
        except ResourceLimitError as e:
            return Response(
                {'status': 'error', 'message': '; '.join(e.messages)},
                status=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE,
            )
        except ValidationError as e:
            return Response(
                {'status': 'error', 'message': '; '.join(e.messages)},
                status=status.HTTP_400_BAD_REQUEST,
            )


def check_api_size(n: int) -> None:
    limit = lab_setting('API_MAX_N')
    if n > limit:
        raise ResourceLimitError(f"The API computes full matrices for n <= {limit}, got n={n}")
