from django.urls import path

from .views import DensityView, ExpectationView, ExtremaView

app_name = 'limits'

urlpatterns = [
    path('density/', DensityView.as_view(), name='density'),
    path('expectation/', ExpectationView.as_view(), name='expectation'),
    path('extrema/', ExtremaView.as_view(), name='extrema'),
]
