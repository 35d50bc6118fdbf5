"""
Tests for the Observer pattern implementation.

This module tests the suite event system: publication, subscription,
the logging subscriber and the failure collector used by the suites.
"""
import logging
from datetime import datetime
from unittest.mock import MagicMock

import pytest

from src.vage_spaces.interfaces.event import CheckEvent, CheckEventType, CheckSubscriber
from src.vage_spaces.analysis.event_system import (
    EventManager, FailureCollector, LoggingCheckSubscriber
)


class TestEventManager:
    """Test suite for the EventManager class."""

    @pytest.fixture
    def event_manager(self):
        """Create an event manager for testing."""
        return EventManager()

    @pytest.fixture
    def mock_subscriber(self):
        """Create a mock subscriber interested in failures and suite ends."""
        subscriber = MagicMock(spec=CheckSubscriber)
        subscriber.get_subscribed_event_types.return_value = [
            CheckEventType.CHECK_FAILED,
            CheckEventType.SUITE_FINISHED
        ]
        return subscriber

    def test_subscribe(self, event_manager, mock_subscriber):
        """Test subscribing to events."""
        counts = event_manager.get_subscriber_count()
        assert counts[CheckEventType.CHECK_FAILED] == 0
        assert counts[CheckEventType.SUITE_FINISHED] == 0

        event_manager.subscribe(mock_subscriber)

        counts = event_manager.get_subscriber_count()
        assert counts[CheckEventType.CHECK_FAILED] == 1
        assert counts[CheckEventType.SUITE_FINISHED] == 1
        assert counts[CheckEventType.CHECK_PASSED] == 0

    def test_unsubscribe(self, event_manager, mock_subscriber):
        """Test unsubscribing from events."""
        event_manager.subscribe(mock_subscriber)
        event_manager.unsubscribe(mock_subscriber)

        counts = event_manager.get_subscriber_count()
        assert counts[CheckEventType.CHECK_FAILED] == 0
        assert counts[CheckEventType.SUITE_FINISHED] == 0

    def test_unsubscribe_unknown_subscriber_is_harmless(self, event_manager, mock_subscriber):
        """Test that removing a subscriber that never subscribed does nothing."""
        event_manager.unsubscribe(mock_subscriber)
        assert all(count == 0 for count in event_manager.get_subscriber_count().values())

    def test_notify(self, event_manager, mock_subscriber):
        """Test notifying subscribers about events."""
        event_manager.subscribe(mock_subscriber)

        event = CheckEvent(
            event_type=CheckEventType.CHECK_FAILED,
            source="vage",
            data={"index": 3, "value": 1.5}
        )
        event_manager.notify(event)

        mock_subscriber.update.assert_called_once_with(event)

    def test_notify_filtered_by_type(self, event_manager):
        """Test that subscribers only receive events of the types they asked for."""
        failure_subscriber = MagicMock(spec=CheckSubscriber)
        failure_subscriber.get_subscribed_event_types.return_value = [CheckEventType.CHECK_FAILED]

        pass_subscriber = MagicMock(spec=CheckSubscriber)
        pass_subscriber.get_subscribed_event_types.return_value = [CheckEventType.CHECK_PASSED]

        event_manager.subscribe(failure_subscriber)
        event_manager.subscribe(pass_subscriber)

        event = CheckEvent(event_type=CheckEventType.CHECK_FAILED, source="inversion")
        event_manager.notify(event)

        failure_subscriber.update.assert_called_once_with(event)
        pass_subscriber.update.assert_not_called()


class TestCheckEvent:
    """Test suite for the CheckEvent data class."""

    def test_defaults(self):
        """Test that timestamp and data are filled in."""
        event = CheckEvent(event_type=CheckEventType.SUITE_STARTED, source="vage")
        assert isinstance(event.timestamp, datetime)
        assert event.data == {}


class TestLoggingCheckSubscriber:
    """Test suite for the LoggingCheckSubscriber class."""

    def test_subscribes_to_all_events_by_default(self):
        """Test that the subscriber defaults to every event type."""
        subscriber = LoggingCheckSubscriber()
        subscribed_types = subscriber.get_subscribed_event_types()

        assert len(subscribed_types) == len(list(CheckEventType))
        for event_type in CheckEventType:
            assert event_type in subscribed_types

    def test_subscribes_to_specified_events(self):
        """Test that the subscriber can be limited to specific event types."""
        specific_types = [CheckEventType.CHECK_FAILED]
        subscriber = LoggingCheckSubscriber(event_types=specific_types)
        assert subscriber.get_subscribed_event_types() == specific_types

    def test_logs_events(self):
        """Test that events are recorded in the in-memory log."""
        subscriber = LoggingCheckSubscriber()

        subscriber.update(CheckEvent(
            event_type=CheckEventType.CHECK_PASSED,
            source="power-bound",
            timestamp=datetime.now(),
            data={"index": 0, "value": 0.25}
        ))

        log = subscriber.get_log()
        assert len(log) == 1
        assert log[0]["type"] == "CHECK_PASSED"
        assert log[0]["source"] == "power-bound"
        assert log[0]["data"]["value"] == 0.25

    def test_failures_are_logged_as_warnings(self, caplog):
        """Test that failed checks reach the logging module at WARNING level."""
        subscriber = LoggingCheckSubscriber()
        with caplog.at_level(logging.WARNING):
            subscriber.update(CheckEvent(
                event_type=CheckEventType.CHECK_FAILED, source="vage", data={"value": 2.0}
            ))
        assert any(record.levelno == logging.WARNING and "vage" in record.getMessage()
                   for record in caplog.records)

    def test_respects_log_size_limit(self):
        """Test that the log size limit is respected."""
        subscriber = LoggingCheckSubscriber(max_log_size=2)

        for i in range(3):
            subscriber.update(CheckEvent(event_type=CheckEventType.CHECK_PASSED, source=f"suite-{i}"))

        log = subscriber.get_log()
        assert len(log) == 2
        assert log[0]["source"] == "suite-1"
        assert log[1]["source"] == "suite-2"

    def test_clear_log(self):
        """Test clearing the log."""
        subscriber = LoggingCheckSubscriber()
        subscriber.update(CheckEvent(event_type=CheckEventType.CHECK_PASSED, source="test"))
        assert len(subscriber.get_log()) == 1

        subscriber.clear_log()
        assert len(subscriber.get_log()) == 0


class TestFailureCollector:
    """Test suite for the FailureCollector class."""

    def test_only_subscribes_to_failures(self):
        """Test that the collector listens to failed checks only."""
        assert FailureCollector().get_subscribed_event_types() == [CheckEventType.CHECK_FAILED]

    def test_counts_past_the_sample_limit(self):
        """Test that every failure is counted while only the first few are kept."""
        collector = FailureCollector(limit=2)
        for i in range(5):
            collector.update(CheckEvent(
                event_type=CheckEventType.CHECK_FAILED, source="vage", data={"index": i}
            ))

        assert collector.count == 5
        failures = collector.get_failures()
        assert [failure["index"] for failure in failures] == [0, 1]
        assert failures[0]["source"] == "vage"
