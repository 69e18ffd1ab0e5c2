from django.urls import path

from .views import MarginalView

app_name = 'exact'

urlpatterns = [
    path('marginal/', MarginalView.as_view(), name='marginal'),
]
