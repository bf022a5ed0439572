"""CAIR: stateless conversational cloud services for social robots and smart devices.

The server side is a Hub facade that pipelines every user utterance through
a Plan Manager (intent recognition) and a Dialogue Manager (topic-driven
conversation over a compiled dialogue tree). The entire per-user conversation
state travels inside each request and response, so server processes hold no
per-client data and scale horizontally. A reference client SDK, a terminal
chat, and a load-generation harness complete the package.
"""

__version__ = "0.1.0"
