"""Windows password-policy audit agent: ReAct agent, tools, and compliance oracle."""

__version__ = "0.1.0"
