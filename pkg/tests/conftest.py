import numpy as np
import pytest

from mmsgeo import space_core


@pytest.fixture(scope="session")
def unit_interval_1001():
    return space_core.build_grid_box(1, 1001, [0.0, 1.0])


@pytest.fixture(scope="session")
def unit_square_128():
    return space_core.build_grid_box(2, 128, [[0.0, 1.0], [0.0, 1.0]])


@pytest.fixture(scope="session")
def box2_256():
    return space_core.build_grid_box(2, 256, [[-2.0, 2.0], [-2.0, 2.0]])


@pytest.fixture(scope="session")
def box2_512():
    return space_core.build_grid_box(2, 512, [[-2.0, 2.0], [-2.0, 2.0]])


@pytest.fixture(scope="session")
def circle_1024():
    return space_core.build_circle(1024, 2.0 * np.pi)


@pytest.fixture(scope="session")
def fat_cantor_4001():
    return space_core.build_fat_cantor_interval(4001, 6, 0.5)


@pytest.fixture(scope="session")
def three_point_space():
    dmat = np.array([[0.0, 2.0, 3.0], [2.0, 0.0, 1.0], [3.0, 1.0, 0.0]])
    return space_core.build_explicit(dmat, np.ones(3))
