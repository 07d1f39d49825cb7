"""Single class containing all reuseable record `type` constants."""

from enum import Enum


class EventConstants(Enum):
    "Define all standard record 'type' keys."

    # Self-describing file header
    HEADER = "header"

    # Run records
    INIT = "init"
    UPDATE = "update"

    # Trace export
    TRACE = "trace"

    # Per-run summary
    SUMMARY = "summary"


# CSV column order for run records
RECORD_COLUMNS = ("t", "virtual_time", "loss", "grad_norm_sq", "contributors", "tau", "d", "queue_depths")
