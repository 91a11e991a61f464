"""`schema`: the GraphSpec JSON schema generated from the document models."""

from __future__ import annotations

import argparse
import json

from zerocap.utils.config import settings
from zerocap.utils.file_utils import write_json
from zerocap.services.model import graphspec_schema
from zerocap.services.reports import Report
from zerocap.commands.common import CommandContext


def register(sub, parents) -> None:
    p = sub.add_parser("schema", parents=parents, help="print the GraphSpec JSON schema")
    p.add_argument("--write", action="store_true", help=f"also refresh {settings.SCHEMA_PATH.name} in the repository")
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    schema = graphspec_schema()
    if args.write:
        write_json(settings.SCHEMA_PATH, schema)
    return Report(command="schema", details={"schema": schema, "text": json.dumps(schema, indent=2)})
