"""
URL configuration for the shuffle lab project.

Only the read-only engine API is routed; the engines themselves are
reachable from the command line through ``manage.py``.
"""
from django.urls import path, include

urlpatterns = [
    path('api/exact/', include('apps.exact.urls')),
    path('api/limits/', include('apps.limits.urls')),
]
