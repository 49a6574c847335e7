"""Exception types shared across the package."""


class RuleLensError(Exception):
    """Base class for all package errors."""


# --- dataset ingestion -------------------------------------------------------

class UnknownColumn(RuleLensError):
    """CSV header does not match the schema's feature/label names."""


class UnknownCategory(RuleLensError):
    """A categorical cell holds a string not declared in the schema."""


class NonNumeric(RuleLensError):
    """A continuous cell cannot be parsed as a number."""


class MissingValue(RuleLensError):
    """A cell is missing and the ingest policy forbids it."""


class DegenerateSplit(RuleLensError):
    """A train/test split would leave one side empty."""


class SchemaMismatch(RuleLensError):
    """An instance vector does not conform to the dataset schema."""


class NoData(RuleLensError):
    """An operation requires at least one row."""


# --- teachers / oracles ------------------------------------------------------

class Divergence(RuleLensError):
    """Training loss became non-finite."""

    def __init__(self, epoch: int):
        super().__init__(f"training loss became non-finite at epoch {epoch}")
        self.epoch = epoch


class HandshakeFailure(RuleLensError):
    """External oracle did not complete the hello exchange."""


class ProtocolViolation(RuleLensError):
    """External oracle sent a malformed or inconsistent reply."""


class OracleTimeout(RuleLensError):
    """External oracle did not answer within the configured timeout."""


# --- mining / learning -------------------------------------------------------

class EmptyTransactionSet(RuleLensError):
    """Itemset mining needs at least one transaction."""


class EmptyPool(RuleLensError):
    """Rule-list training needs a non-empty antecedent pool."""


# --- metrics / service -------------------------------------------------------

class EmptySelection(RuleLensError):
    """A data filter matched no instances (signal, not fatal)."""


class BadConfig(RuleLensError):
    """Service configuration is invalid."""


class PortInUse(RuleLensError):
    """The requested listening port is taken."""


class RuleListTooLongWarning(UserWarning):
    """Extracted list exceeds the readability guideline."""
