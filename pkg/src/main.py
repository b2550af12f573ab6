#!/usr/bin/env python3
"""
Multi-reservoir dynamics command-line entry point
"""
import logging
import sys
from typing import List, Optional

from src.cli_config import Config
from src.exceptions import DynamicsError
from src.runner import run


def main(argv: Optional[List[str]] = None) -> int:
    """Main function"""
    config = Config()
    config.parse_args(argv)

    logging.basicConfig(
        level=config.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        run_config = config.load_config()
        if not config.quiet:
            print("=" * 60)
            print("Multi-reservoir dynamics")
            print("=" * 60)
            print(config)
            print("=" * 60)
        return run(
            config.subcommand,
            run_config,
            config.out_dir,
            quiet=config.quiet,
            stationary=config.stationary,
            max_workers=config.max_workers,
        )
    except DynamicsError as e:
        print(f"Error: {e.to_error_message()}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"Error: [io] {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
