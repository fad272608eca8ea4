"""
Result document models, schema version 1.0.

``ResultDocument.model_json_schema()`` gives the JSON Schema form. The
header's ``config`` is the validated ``RunConfig`` itself.
"""
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .runconfig import SEED_LIMIT, Command, RunConfig

SCHEMA_VERSION = '1.0'


class Header(BaseModel):
    schema_version: Literal['1.0']
    command: Command
    config: RunConfig
    seed: int = Field(ge=0, lt=SEED_LIMIT)
    content_hash: str = Field(pattern=r'^[0-9a-f]{64}$')
    created_at: str
    version: Optional[str] = None


class ResultDocument(BaseModel):
    model_config = ConfigDict(extra='forbid')

    header: Header
    body: dict
