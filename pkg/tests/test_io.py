import csv
import json

import numpy as np
import pytest

from config import Config, _env_int
from models.errors import ConfigError, DomainError
from models.grid import Grid, GridFunction
from models.run_config import InteriorConfig, LiouvilleConfig, SolveConfig, VerifyConfig
from utils.io import (GRIDFUNCTION_MAGIC, parse_gridfunction, read_gridfunction, write_csv,
                      write_gridfunction, write_gridfunction_csv, write_json)
from utils.rng import keyed_rng, make_rng
from utils.validators import validate_choices, validate_int, validate_node_count, validate_positive


class TestGridFunctionFile:

    def test_layout(self, tmp_path):
        grid = Grid.centered(2, 5, 0.5)
        u = GridFunction(grid, np.arange(25.0) / 3.0)
        path = write_gridfunction(str(tmp_path / "u.txt"), u)
        lines = open(path).read().splitlines()
        assert lines[0] == GRIDFUNCTION_MAGIC
        assert lines[1] == "2 5 0.5"
        assert len(lines) == 27
        assert float(lines[2 + 7]) == u.values[1, 2]

    def test_read_back_is_bit_exact(self, tmp_path, rng):
        grid = Grid.centered(3, 5, 1.5)
        u = GridFunction(grid, rng.standard_normal(grid.shape))
        back = read_gridfunction(write_gridfunction(str(tmp_path / "u.txt"), u))
        assert back.grid == grid
        assert np.array_equal(back.values, u.values)

    def test_rejects_other_formats(self):
        with pytest.raises(DomainError):
            parse_gridfunction("x,y\n1,2\n")
        with pytest.raises(DomainError):
            parse_gridfunction(f"{GRIDFUNCTION_MAGIC}\n2 5\n")
        with pytest.raises(DomainError):
            parse_gridfunction(f"{GRIDFUNCTION_MAGIC}\n2 5 1.0\n" + "0.0\n" * 24)

    def test_csv_columns(self, tmp_path, paraboloid3):
        path = write_gridfunction_csv(str(tmp_path / "u.csv"), paraboloid3)
        with open(path) as f:
            rows = list(csv.reader(f))
        assert rows[0] == ['x1', 'x2', 'x3', 'value']
        assert len(rows) == 1 + 9 ** 3
        assert [float(v) for v in rows[1]] == [-1.0, -1.0, -1.0, 1.5]
        assert float(rows[2][2]) == -0.75


class TestReports:

    def test_json_is_sorted_and_newline_terminated(self, tmp_path):
        path = write_json(str(tmp_path / "out" / "r.json"), {'b': 1, 'a': [1.5]})
        text = open(path).read()
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {'a': [1.5], 'b': 1}

    def test_no_temporary_files_left(self, tmp_path):
        write_csv(str(tmp_path / "t.csv"), ['a'], [['1'], ['2']])
        assert sorted(p.name for p in tmp_path.iterdir()) == ['t.csv']


class TestValidators:

    def test_positive(self):
        assert validate_positive('L', 2) == 2.0
        for bad in (0, -1.0, 'x', float('inf')):
            with pytest.raises(ConfigError):
                validate_positive('L', bad)

    def test_int_rejects_bool_and_float(self):
        with pytest.raises(ConfigError):
            validate_int('seed', True)
        with pytest.raises(ConfigError):
            validate_int('seed', 1.0)

    @pytest.mark.parametrize("m", [3, 8, 'nine'])
    def test_node_count(self, m):
        with pytest.raises(ConfigError):
            validate_node_count('nodes', m)

    def test_choices(self):
        assert validate_choices('families', ['a'], ['a', 'b']) == ['a']
        with pytest.raises(ConfigError, match="unknown entries"):
            validate_choices('families', ['c'], ['a', 'b'])


class TestRunConfigs:

    def test_verify_defaults(self, write_config):
        cfg = VerifyConfig.from_file(write_config("v.json", {'schema_version': 1, 'dimensions': [2, 9]}))
        assert cfg.samples == 10000
        assert cfg.duality_dimensions == [2]
        assert cfg.seed == Config.DEFAULT_SEED

    def test_overrides_replace_file_values(self, write_config):
        path = write_config("v.json", {'schema_version': 1, 'seed': 5})
        cfg = VerifyConfig.from_file(path, seed=7, out_dir='out')
        assert (cfg.seed, cfg.out_dir) == (7, 'out')
        assert VerifyConfig.from_file(path, seed=None).seed == 5

    def test_missing_schema_version(self, write_config):
        with pytest.raises(ConfigError, match="schema_version"):
            VerifyConfig.from_file(write_config("v.json", {'samples': 10}))

    def test_unknown_key(self, write_config):
        with pytest.raises(ConfigError, match="unknown config keys"):
            VerifyConfig.from_file(write_config("v.json", {'schema_version': 1, 'sample': 10}))

    def test_command_mismatch(self, write_config):
        path = write_config("s.json", {'schema_version': 1, 'command': 'solve'})
        with pytest.raises(ConfigError):
            VerifyConfig.from_file(path, command='verify')

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="malformed JSON"):
            SolveConfig.from_file(str(path))

    def test_solve_boundary_forms(self, write_config):
        cfg = SolveConfig.from_file(write_config("s.json", {
            'schema_version': 1, 'dimension': 2, 'boundary': {'quadratic': {'A': [[2, 0], [0, 2]]}}}))
        assert cfg.boundary == {'quadratic': {'A': [[2, 0], [0, 2]]}}
        with pytest.raises(ConfigError):
            SolveConfig.from_dict({'schema_version': 1, 'boundary': {'family': 'saddle'}})
        with pytest.raises(ConfigError):
            SolveConfig.from_dict({'schema_version': 1, 'operator': 'sigma3'})
        with pytest.raises(ConfigError):
            SolveConfig.from_dict({'schema_version': 1, 'nodes': 16})

    def test_solve_accepts_zero_rhs_for_later_domain_check(self):
        assert SolveConfig.from_dict({'schema_version': 1, 'rhs': 0}).rhs == 0.0

    def test_liouville_only_quadratic_families(self):
        with pytest.raises(ConfigError):
            LiouvilleConfig.from_dict({'schema_version': 1, 'families': ['wave']})

    def test_interior_resolutions_need_every_dimension(self):
        with pytest.raises(ConfigError, match="no entry for dimension 3"):
            InteriorConfig.from_dict({'schema_version': 1, 'dimensions': [2, 3], 'resolutions': {'2': [9]}})

    def test_interior_to_dict_uses_string_keys(self):
        data = InteriorConfig.from_dict({'schema_version': 1}).to_dict()
        assert data['resolutions'] == {'2': [17, 33, 65], '3': [5, 9, 17]}
        assert 'out_dir' not in data
        json.dumps(data)


class TestRandomStreams:

    def test_same_seed_same_draws(self):
        assert np.array_equal(make_rng(3).random(10), make_rng(3).random(10))

    def test_uniform_draws_lie_in_unit_interval(self):
        draws = make_rng(11).random(10000)
        assert draws.min() >= 0.0 and draws.max() < 1.0

    def test_keyed_streams_are_independent_of_order(self):
        first = keyed_rng(1, 0, 2).random(5)
        keyed_rng(1, 3, 4).random(100)
        assert np.array_equal(keyed_rng(1, 0, 2).random(5), first)
        assert not np.array_equal(keyed_rng(1, 0, 3).random(5), first)


class TestEnvironmentConfig:

    def test_defaults_are_valid(self):
        assert Config.validate()

    def test_rejects_zero_threads(self, monkeypatch):
        monkeypatch.setattr(Config, 'THREADS', 0)
        with pytest.raises(ValueError, match="HQL_THREADS"):
            Config.validate()

    def test_rejects_unknown_log_level(self, monkeypatch):
        monkeypatch.setattr(Config, 'LOG_LEVEL', 'LOUD')
        with pytest.raises(ValueError, match="HQL_LOG_LEVEL"):
            Config.validate()

    def test_unparseable_integer_settings_are_reported(self, monkeypatch):
        monkeypatch.setenv('HQL_THREADS', 'four')
        assert _env_int('HQL_THREADS', '1') is None
        monkeypatch.setattr(Config, 'THREADS', None)
        monkeypatch.setattr(Config, 'DEFAULT_SEED', None)
        with pytest.raises(ValueError, match="HQL_THREADS.*HQL_SEED"):
            Config.validate()
