import math

import pytest

from qdswitch import (
    CqedParams,
    ElectrostaticParams,
    OpticalFrame,
    StarkCoefficients,
    kappa_from_q,
)

TWO_PI = 2.0 * math.pi


@pytest.fixture
def device_elec():
    return ElectrostaticParams(
        donor_density_cm3=9e15,
        barrier_potential_v=0.36,
        relative_permittivity=12.9,
        electrode_distance_um=0.75,
    )


@pytest.fixture
def device_stark():
    return StarkCoefficients(
        dipole_mev_um_per_v=-0.009,
        polarizability_mev_um2_per_v2=-0.015,
    )


@pytest.fixture
def device_frame():
    return OpticalFrame(reference_wavelength_nm=935.0, quality_factor=4000.0)


@pytest.fixture
def device_cqed(device_frame):
    return CqedParams(
        cavity_freq=0.0,
        dot_freq=0.0,
        coupling=TWO_PI * 20.0,
        cavity_decay=kappa_from_q(device_frame),
        dot_decay=TWO_PI * 0.1,
    )
