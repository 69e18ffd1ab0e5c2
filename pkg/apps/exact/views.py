from apps.permcore.views import EngineView, check_api_size

from .formulas import exact_marginal_matrix, exact_offdiag_marginal
from .serializers import MarginalQuerySerializer


class MarginalView(EngineView):
    """Closed-form marginal matrix, or one entry when ``j`` and ``a`` are given"""
    query_serializer_class = MarginalQuerySerializer

    def compute(self, params):
        kind, n, method = params['kind'], params['n'], params['method']
        check_api_size(n)
        if 'j' in params:
            value = exact_offdiag_marginal(kind, n, params['j'], params['a'], method)
            return {'kind': kind, 'n': n, 'j': params['j'], 'a': params['a'], 'probability': value}

        matrix = exact_marginal_matrix(kind, n, method)
        return {'kind': kind, 'n': n, 'entries': matrix.entries.tolist()}
