from .fisher import (
    FisherReport,
    MappingJacobian,
    assemble_certificate,
    corank,
    fim_from_certificate,
    wahba_mapping_jacobian,
)

__all__ = [
    "FisherReport",
    "MappingJacobian",
    "assemble_certificate",
    "corank",
    "fim_from_certificate",
    "wahba_mapping_jacobian",
]
