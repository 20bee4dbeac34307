"""Toolkit for parsing social-media data download packages (DDPs), auditing
their reliability against session logs, and checking GDPR Article 15
disclosure coverage."""

__version__ = "0.1.0"
