"""
Database peewee_ model definitions for the benchmark history.

Every `cata-verify bench` run is recorded as a `BenchRun` with one `BenchRow`
per program, so that later runs can be compared against it.

Attributes:
    db: A deferred ``SqliteDatabase``. `initDb` points it at the history file
        and creates the tables. It is set as the default DB connection in
        `BaseModel.Meta`.
    logger: Local module logger

.. _peewee: https://docs.peewee-orm.com/en/latest/index.html
"""

import logging
from datetime import datetime
from pathlib import Path

# DatabaseError is imported from here by data modules, so @pylint: disable=unused-import
from peewee import (
    Model,
    SqliteDatabase,
    ForeignKeyField,
    IntegerField,
    CharField,
    FloatField,
    DateTimeField,
    DatabaseError,
)

# pylint: enable=unused-import

logger = logging.getLogger(__name__)

# All these classes will have too few public methods, so
# @pylint: disable=too-few-public-methods

db = SqliteDatabase(None)


class BaseModel(Model):
    """
    Base database model.

    It only sets the `Meta.database` to `db` which then binds all derived
    models to this DB connection.
    """

    class Meta:
        """
        Model config for the base model class.

        Attributes:
            database: The default `db` to bind all derived model to.
        """

        database = db


class BenchRun(BaseModel):
    """
    One run of the benchmark over a corpus.

    Attributes:
        id: Primary key auto incrementing ID
        created: When the run finished.
        version: The cataverify version.
        solver: Name and version of the CHC solver.
        corpus: The corpus directory, as given.
        attempted: Total contracts attempted.
        verified: Total contracts verified.
        transform_ms: Total transformation time.
        checksat_ms: Total solver time.
    """

    created = DateTimeField(default=datetime.now)
    version = CharField()
    solver = CharField(default="")
    corpus = CharField(index=True)
    attempted = IntegerField(default=0)
    verified = IntegerField(default=0)
    transform_ms = FloatField(default=0.0)
    checksat_ms = FloatField(default=0.0)


class BenchRow(BaseModel):
    """
    The outcome for one program of a `BenchRun`.

    Attributes:
        run: The `BenchRun` this row belongs to.
        program: Program name, the input file stem.
        attempted: Contracts attempted.
        verified: Contracts verified.
        transform_ms: Transformation time.
        checksat_ms: Solver time.
        status: ``ok``, or ``failed`` when the pipeline reported an error.
    """

    run = ForeignKeyField(BenchRun, backref="rows", on_delete="CASCADE")
    program = CharField()
    attempted = IntegerField(default=0)
    verified = IntegerField(default=0)
    transform_ms = FloatField(default=0.0)
    checksat_ms = FloatField(default=0.0)
    status = CharField(default="ok")


def initDb(path: str | Path):
    """
    Opens the history database at ``path``, creating it and the tables if
    needed.

    Raises:
        DatabaseError: if the file can not be opened.
    """
    db.init(str(path), pragmas={"foreign_keys": 1})
    with db.connection_context():
        db.create_tables([BenchRun, BenchRow], safe=True)
    logger.debug("Bench history database: %s", path)
