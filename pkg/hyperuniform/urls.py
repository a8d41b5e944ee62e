"""
URL configuration for hyperuniform project.

Only the admin is routed; it is used to browse recorded runs.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
