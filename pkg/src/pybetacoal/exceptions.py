
# ===================== Domain Exceptions =====================
class DomainError(ValueError):
    """Raised when an argument lies outside a function's documented domain"""

class DivergenceError(DomainError):
    """Raised when a beta integral defining a collision rate diverges"""
    # For example: a + n - k - 1 <= 0 for a beta(a, b) measure with a < 1

# ===================== Resource Exceptions =====================
class ResourceBudgetError(Exception):
    """Raised when a computation would exceed a configured cap or budget"""
    # work is refused, never silently truncated

# ===================== Verification Exceptions =====================
class CheckDefinitionError(Exception):
    """Raised for unknown check names, or badly formed check parameters"""
