"""
Factory for creating exponential kernels.

Builds the right kernel class from a spec (or its text spelling) and caches
it, so a LUT is precomputed once per (spec, formats, domain) no matter how
many trials or threads use it.
"""
from threading import Lock
from typing import Dict, Optional, Tuple, Union

from ..config.settings import RuntimeSettings
from ..core.fixed_point import FixedFormat
from ..utils.exceptions import ConfigurationError
from ..utils.logger import get_logger
from .base_kernel import BaseExpKernel
from .exact_kernel import ExactKernel
from .lut import LutKernel
from .spec import DEFAULT_DOMAIN, ExpKernelSpec, KernelMethod
from .taylor_kernel import TaylorKernel

logger = get_logger(__name__)


class KernelFactory:
    """
    Factory for exponential kernels.

    Usage:
        factory = KernelFactory()
        kernel = factory.create("lut-linear-64", FixedFormat.parse("q16.15"))
    """

    def __init__(self, settings: Optional[RuntimeSettings] = None):
        """Initialize factory with runtime settings (precision of the golden references)."""
        self.settings = settings or RuntimeSettings.from_env()
        self._cache: Dict[ExpKernelSpec, BaseExpKernel] = {}
        self._lock = Lock()

    def create(
        self,
        spec: Union[ExpKernelSpec, str],
        fmt: Optional[FixedFormat] = None,
        domain: Tuple[float, float] = DEFAULT_DOMAIN,
        work_format: Optional[FixedFormat] = None,
    ) -> BaseExpKernel:
        """
        Create (or reuse) the kernel for a spec.

        Args:
            spec: Kernel spec, or its text spelling (then ``fmt`` is required)
            fmt: Operand format for text specs
            domain: Kernel domain for text specs
            work_format: Working format override for text specs

        Returns:
            Kernel instance, shared between callers asking for the same spec

        Raises:
            ConfigurationError: If the kernel spec is invalid or cannot be built
        """
        if isinstance(spec, str):
            if fmt is None:
                raise ConfigurationError(f"kernel {spec!r} needs an operand format")
            spec = ExpKernelSpec.parse(spec, fmt, domain=domain, work_format=work_format)

        with self._lock:
            kernel = self._cache.get(spec)
            if kernel is None:
                kernel = self._build(spec)
                self._cache[spec] = kernel
                logger.debug("created %r", kernel)
            return kernel

    def _build(self, spec: ExpKernelSpec) -> BaseExpKernel:
        if spec.method is KernelMethod.EXACT:
            return ExactKernel(spec, prec=self.settings.mp_prec)
        if spec.method is KernelMethod.TAYLOR:
            return TaylorKernel(spec)
        if spec.method is KernelMethod.LUT:
            return LutKernel(spec, prec=self.settings.mp_prec)
        raise ConfigurationError(f"unknown kernel method: {spec.method}")


_default_factory: Optional[KernelFactory] = None
_default_lock = Lock()


def get_kernel_factory() -> KernelFactory:
    """Process-wide factory configured from the environment."""
    global _default_factory
    with _default_lock:
        if _default_factory is None:
            _default_factory = KernelFactory()
        return _default_factory


def create_kernel(spec: Union[ExpKernelSpec, str], fmt: Optional[FixedFormat] = None, **kwargs) -> BaseExpKernel:
    """Shortcut for ``get_kernel_factory().create(...)``."""
    return get_kernel_factory().create(spec, fmt, **kwargs)
