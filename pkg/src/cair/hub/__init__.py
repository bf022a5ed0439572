"""Facade web service: plan manager and dialogue manager behind one endpoint."""

from cair.hub.app import HubConfig, create_app, PROCESSING_HEADER

__all__ = ["HubConfig", "create_app", "PROCESSING_HEADER"]
