"""Error taxonomy shared by the library, the service, and the CLI.

Three failure classes cover everything the pipelines can report:

* ``SchemaError`` -- bad input: malformed JSON, violated preconditions,
  out-of-range parameters.  CLI exit code 2, HTTP 400.
* ``SearchExhausted`` -- a bounded deterministic search (prime scan,
  parameter scan, sampling budget) ran out before finding a witness.
  CLI exit code 3, HTTP 422.
* ``InternalCheckError`` -- a hard self-consistency assertion failed.
  Never expected; CLI exit code 4, HTTP 500.
"""


class SchemaError(ValueError):
    """Input violates a documented precondition or wire format."""


class SearchExhausted(RuntimeError):
    """A bounded search ended without a witness; raise the bound and retry."""


class InternalCheckError(RuntimeError):
    """An internal invariant failed.  Indicates a bug, not bad input."""
