"""Exception hierarchy with stable machine-readable error names.

The ``name`` attribute is the contract: it is what the CLI emits in its
JSON error objects and what binding layers use to round-trip failures.
"""


class TalismanError(Exception):
    name = "TalismanError"


class ZeroVectorRow(TalismanError):
    name = "ZeroVectorRow"

    def __init__(self, index):
        self.index = index
        super().__init__(f"row {index} has (near-)zero norm and cannot be normalized")


class DimMismatch(TalismanError):
    name = "DimMismatch"


class NotNormalized(TalismanError):
    name = "NotNormalized"


class EmptyInput(TalismanError):
    name = "EmptyInput"


class KernelKindMismatch(TalismanError):
    name = "KernelKindMismatch"


class IndexOutOfRange(TalismanError):
    name = "IndexOutOfRange"


class AlreadySelected(TalismanError):
    name = "AlreadySelected"


class BudgetExceedsPool(TalismanError):
    name = "BudgetExceedsPool"


class PoolTooLarge(TalismanError):
    name = "PoolTooLarge"


class TooFewClasses(TalismanError):
    name = "TooFewClasses"


class InvalidConfig(TalismanError):
    name = "InvalidConfig"


class InsufficientObjects(TalismanError):
    name = "InsufficientObjects"


class EmptyLabeledSet(TalismanError):
    name = "EmptyLabeledSet"


class EmptyTestSet(TalismanError):
    name = "EmptyTestSet"


#: Every error name a caller may see, for binding layers that map names
#: back to exception classes.
ERROR_NAMES = tuple(
    cls.name
    for cls in (
        TalismanError,
        ZeroVectorRow,
        DimMismatch,
        NotNormalized,
        EmptyInput,
        KernelKindMismatch,
        IndexOutOfRange,
        AlreadySelected,
        BudgetExceedsPool,
        PoolTooLarge,
        TooFewClasses,
        InvalidConfig,
        InsufficientObjects,
        EmptyLabeledSet,
        EmptyTestSet,
    )
)
