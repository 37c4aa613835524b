"""Тесты CRUD операций журнала матчей."""
import pytest

from repval.crud.match import MatchCRUD
from repval.models.enums import Scenario, Winner
from repval.schemas.match import MatchResult


def make_result(a="RFQ_A", b="IL_A", winner=Winner.A, seed=0):
    """Результат матча для журнала."""
    return MatchResult(
        player_a=a,
        player_b=b,
        winner=winner,
        kills_a=3,
        kills_b=1,
        steps=42,
        seed=seed,
        scenario=Scenario.WILD_WAR,
    )


@pytest.fixture
def filled(db_session):
    """Фикстура журнала с двумя турнирами."""
    MatchCRUD.record_results(db_session, "main", [
        make_result(seed=0),
        make_result("IL_A", "MFQ_A", Winner.DRAW, seed=1),
        make_result("MFQ_A", "RFQ_A", Winner.B, seed=2),
    ])
    MatchCRUD.record_results(db_session, "other", [
        make_result("AC_A", "MFAC_A", seed=7),
    ])
    return db_session


class TestRecordMatch:
    """Тесты записи матчей."""

    def test_record_fields(self, db_session):
        """Тест полей сохранённой записи."""
        MatchCRUD.record_results(db_session, "main", [
            make_result(seed=4), make_result(seed=5)
        ])

        record = MatchCRUD.get_matches(db_session, "main")[1]

        assert record.id is not None
        assert record.tournament == "main"
        assert record.game_index == 1
        assert record.winner == Winner.A
        assert record.scenario == Scenario.WILD_WAR
        assert "RFQ_A vs IL_A" in repr(record)

    def test_get_match(self, filled):
        """Тест получения записи по ID."""
        listed = MatchCRUD.get_matches(filled, "main")[2]

        found = MatchCRUD.get_match(filled, listed.id)

        assert found is not None
        assert found.player_a == "MFQ_A"
        assert found.game_index == 2

    def test_get_missing_match(self, db_session):
        """Тест получения несуществующей записи."""
        assert MatchCRUD.get_match(db_session, 999) is None

    def test_record_results_count(self, db_session):
        """Тест пакетной записи."""
        count = MatchCRUD.record_results(
            db_session, "main", [make_result(seed=s) for s in range(4)]
        )

        assert count == 4
        assert len(MatchCRUD.get_matches(db_session, "main")) == 4


class TestQueries:
    """Тесты выборок из журнала."""

    def test_filter_tournament(self, filled):
        """Тест фильтра по турниру."""
        assert len(MatchCRUD.get_matches(filled, "main")) == 3
        assert len(MatchCRUD.get_matches(filled, "other")) == 1
        assert len(MatchCRUD.get_matches(filled)) == 4

    def test_filter_player(self, filled):
        """Тест фильтра по игроку на любой стороне."""
        matches = MatchCRUD.get_matches(filled, "main", player="MFQ_A")

        assert [m.game_index for m in matches] == [1, 2]

    def test_pagination(self, filled):
        """Тест пагинации."""
        page = MatchCRUD.get_matches(filled, "main", skip=1, limit=1)

        assert len(page) == 1
        assert page[0].game_index == 1

    def test_get_results_order(self, filled):
        """Тест результатов в порядке расписания."""
        results = MatchCRUD.get_results(filled, "main")

        assert [r.seed for r in results] == [0, 1, 2]
        assert results[0] == make_result(seed=0)
        assert results[1].winner == Winner.DRAW

    def test_get_results_unknown(self, filled):
        """Тест пустого результата для неизвестного турнира."""
        assert MatchCRUD.get_results(filled, "absent") == []


class TestDelete:
    """Тесты удаления турнира."""

    def test_delete_tournament(self, filled):
        """Тест удаления только записей метки."""
        deleted = MatchCRUD.delete_tournament(filled, "main")

        assert deleted == 3
        assert MatchCRUD.get_results(filled, "main") == []
        assert len(MatchCRUD.get_results(filled, "other")) == 1

    def test_delete_missing(self, db_session):
        """Тест удаления отсутствующей метки."""
        assert MatchCRUD.delete_tournament(db_session, "absent") == 0
