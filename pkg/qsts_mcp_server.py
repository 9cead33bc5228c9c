"""
Modular MCP Server for five-party quantum state sharing simulations
"""

import logging
from pathlib import Path
from dotenv import load_dotenv

from mcp.server.fastmcp import FastMCP

# Load environment variables from .env file
env_path = Path(__file__).parent / ".env"
load_dotenv(dotenv_path=env_path)

from modules.settings import get_settings, setup_logging

# Import all modules
from modules import qstate
from modules import protocol
from modules import adversary
from modules import metrics

logger = logging.getLogger("qsts_mcp_server")


def main():
    """Initialize the MCP server and register all tools"""
    settings = get_settings()
    setup_logging(settings.log_level)
    logger.info(
        "starting seed=%d max_qubits=%d decoys_per_sequence=%d",
        settings.seed,
        settings.max_qubits,
        settings.decoys_per_sequence,
    )

    # Configure all modules with the settings
    qstate.configure(settings)
    protocol.configure(settings)
    adversary.configure(settings)

    # Create the MCP app
    app = FastMCP("QSTS Simulator v1.0")

    # Register tools from all modules
    app = protocol.register_tools(app)
    app = adversary.register_tools(app)
    app = metrics.register_tools(app)

    # Run the MCP server
    app.run()


if __name__ == "__main__":
    main()
