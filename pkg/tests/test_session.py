"""Tests for the async session."""

from unittest.mock import patch

import pytest

from calorex.config import CalorexConfig
from calorex.resources import CaloricResource, PointResource, SweepResource, ValidationResource
from calorex.session import CalorexSession


class TestCalorexSessionInitialization:
    """Tests for CalorexSession initialization."""

    def test_initialization_with_defaults(self, monkeypatch):
        # Arrange
        monkeypatch.delenv("CALOREX_CONFIG", raising=False)

        # Act
        session = CalorexSession()

        # Assert
        assert session.config == CalorexConfig()
        assert session.jobs >= 1
        assert session._executor is None

    def test_initialization_with_config_and_jobs(self):
        # Arrange
        config = CalorexConfig().with_overrides({"nlie.d_eps": 1e-2})

        # Act
        session = CalorexSession(config=config, jobs=3)

        # Assert
        assert session.config is config
        assert session.jobs == 3

    def test_resources_are_initialized(self):
        # Act
        session = CalorexSession(jobs=1)

        # Assert
        assert isinstance(session.points, PointResource)
        assert isinstance(session.sweeps, SweepResource)
        assert isinstance(session.caloric, CaloricResource)
        assert isinstance(session.validation, ValidationResource)
        assert session.points._session is session


class TestCalorexSessionRun:
    """Tests for running engine calls on the worker pool."""

    @pytest.mark.asyncio
    async def test_run_forwards_arguments(self):
        # Arrange
        session = CalorexSession(jobs=2)

        # Act
        async with session:
            result = await session._run(divmod, 7, 2)

        # Assert
        assert result == (3, 1)
        assert session._executor is None

    @pytest.mark.asyncio
    async def test_run_propagates_exceptions(self):
        # Arrange
        session = CalorexSession(jobs=1)

        # Act & Assert
        async with session:
            with pytest.raises(ZeroDivisionError):
                await session._run(divmod, 1, 0)

    @pytest.mark.asyncio
    async def test_close_without_work(self):
        # Arrange
        session = CalorexSession(jobs=1)

        # Act
        await session.close()

        # Assert
        assert session._executor is None

    @pytest.mark.asyncio
    async def test_offload_all_keeps_order(self):
        # Arrange
        session = CalorexSession(jobs=4)
        calls = [lambda i=i: i * i for i in range(8)]

        # Act
        async with session:
            with patch.object(session, "_get_executor", wraps=session._get_executor) as get:
                results = await session.points._offload_all(calls)

        # Assert
        assert results == [i * i for i in range(8)]
        assert get.call_count == 8
