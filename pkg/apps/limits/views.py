from apps.permcore.views import EngineView

from .analysis import density_extrema, expected_position, expected_position_quadrature
from .densities import density_grid
from .serializers import DensityQuerySerializer, ExpectationQuerySerializer, ExtremaQuerySerializer


class DensityView(EngineView):
    query_serializer_class = DensityQuerySerializer

    def compute(self, params):
        frame = density_grid(params['which'], params['param'], params['grid'])
        return {
            'which': params['which'],
            'param': params['param'],
            't': frame['t'].tolist(),
            'density': frame['density'].tolist(),
        }


class ExpectationView(EngineView):
    query_serializer_class = ExpectationQuerySerializer

    def compute(self, params):
        return {
            'which': params['which'],
            's': params['s'],
            'value': expected_position(params['which'], params['s']),
            'quadrature': expected_position_quadrature(params['which'], params['s']),
        }


class ExtremaView(EngineView):
    query_serializer_class = ExtremaQuerySerializer

    def compute(self, params):
        report = density_extrema(params['which'], params['param'])
        return {'which': params['which'], 'param': params['param'], **report.to_dict()}
