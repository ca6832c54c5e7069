import argparse
import io
import json
import os
import tempfile

import mock

from tomojoint.tests.utils import TomojointTestCase
from tomojoint.bin.tomojoint import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED, run
from tomojoint.cli.commands import (
    cmd_evolve,
    cmd_expect,
    cmd_reconstruct,
    cmd_residual,
    cmd_tomogram,
    residual_report,
)
from tomojoint.cli.config import RunConfig, parse_grid_override, parse_tolerance
from tomojoint.cli.errors import UsageError
from tomojoint.cli.verify import (
    DEFAULT_GRID,
    DEVIATIONS,
    GRIDS,
    REQUIRED_DEVIATIONS,
    STEPPER_AXES,
    Check,
    VerifyContext,
    cmd_verify,
    default_checks,
    deviation_ledger,
    run_verify,
)
from tomojoint.dynamics.errors import BlowUp
from tomojoint.jointdist.errors import PriorUnderflow
from tomojoint.symbols.errors import SymbolError
from tomojoint.tomography.models import OPTICAL

SMALL_GRID = {'X': (-6.0, 6.0, 61), 'mu': (-2.0, 2.0, 9), 'nu': (-2.0, 2.0, 9)}
SYMBOL_GRID = {'X': (-12.0, 12.0, 241), 'mu': (-4.5, 4.5, 37), 'nu': (-4.5, 4.5, 37)}
STEPPER_GRID = {'X': (-8.0, 8.0, 81), 'mu': (-3.5, 3.5, 57), 'nu': (-3.5, 3.5, 57)}


class OutputDirMixin(object):

    def setUp(self):
        self._folder = tempfile.TemporaryDirectory()
        self.out = self._folder.name

    def tearDown(self):
        self._folder.cleanup()

    def config(self, **kwargs):
        kwargs.setdefault('out', self.out)
        return RunConfig(**kwargs)


class ConfigParsingTest(TomojointTestCase):

    def test_grid_override(self):
        self.assertEqual(parse_grid_override('x:-8,8,161'), ('X', (-8.0, 8.0, 161)))
        self.assertEqual(parse_grid_override('theta:0,3.14,11'), ('theta', (0.0, 3.14, 11)))

    def test_bad_grid_override(self):
        for text in ('x-8,8,161', 'z:0,1,3', 'mu:0,1', 'nu:a,1,3'):
            with self.assertRaises(UsageError):
                parse_grid_override(text)

    def test_tolerance(self):
        self.assertEqual(parse_tolerance('stationary-symplectic-fock0=0.05'), ('stationary-symplectic-fock0', 0.05))
        for text in ('0.05', '=0.05', 'name=big'):
            with self.assertRaises(UsageError):
                parse_tolerance(text)

    def test_potential_string(self):
        self.assertEqual(RunConfig(potential='0,0,0.5').potential, (0.0, 0.0, 0.5))
        with self.assertRaises(UsageError):
            RunConfig(potential='0,x')

    def test_unknown_choices(self):
        for kwargs in ({'representation': 'wigner'}, {'method': 'fft'}, {'path': 'shortcut'},
                       {'grid': {'z': (0, 1, 3)}}):
            with self.assertRaises(UsageError):
                RunConfig(**kwargs)

    def test_unknown_keys(self):
        with self.assertRaises(UsageError):
            RunConfig.from_dict({'state': 'fock:n=0', 'colour': 'blue'})

    def test_missing_state(self):
        with self.assertRaises(UsageError):
            RunConfig().state_spec()

    def test_prior_must_match_representation(self):
        self.assertEqual(RunConfig(representation=OPTICAL).prior_spec().representation, OPTICAL)
        with self.assertRaises(UsageError):
            RunConfig(representation=OPTICAL, prior='p1-default').prior_spec()

    def test_bad_params(self):
        with self.assertRaises(UsageError):
            RunConfig(mass=-1.0).params()

    def test_default_axes(self):
        config = RunConfig(grid={'x': (-4, 4, 41)})
        self.assertEqual(config.X_axis.count, 41)
        self.assertEqual([axis.count for axis in config.parameter_axes], [97, 97])
        self.assertEqual(config.axis('q', (-6.0, 6.0, 121)).count, 121)
        self.assertEqual(config.axis('X', (-6.0, 6.0, 121)).count, 41)

    def test_dump_and_load(self):
        config = RunConfig(state='fock:n=1', grid={'mu': (-2, 2, 9)}, potential=(0, 0, 0.5),
                           tolerances={'radon-symplectic-fock-n0': 1e-2})
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'run.json')
            config.dump(path)
            self.assertEqual(RunConfig.load(path), config)

    def test_load_rejects_non_objects(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'run.json')
            with open(path, 'w') as handle:
                handle.write('[1, 2]')
            with self.assertRaises(UsageError):
                RunConfig.load(path)
            with self.assertRaises(UsageError):
                RunConfig.load(os.path.join(folder, 'missing.json'))


class ConfigPrecedenceTest(TomojointTestCase):

    def test_flags_override_file_override_defaults(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'run.json')
            with open(path, 'w') as handle:
                json.dump({'hbar': 2.0, 'mass': 3.0, 'grid': {'X': [-6, 6, 61]}}, handle)
            args = argparse.Namespace(config=path, mass=1.5, hbar=None, grid=['mu:-2,2,9'],
                                      tolerances=['deviation-ledger=1'], state='fock:n=0')
            config = RunConfig.from_args(args)
        self.assertEqual(config.mass, 1.5)
        self.assertEqual(config.hbar, 2.0)
        self.assertEqual(config.omega, 1.0)
        self.assertEqual(config.grid, {'X': (-6, 6, 61), 'mu': (-2.0, 2.0, 9)})
        self.assertEqual(config.tolerance('deviation-ledger', 0.0), 1.0)
        self.assertEqual(config.state, 'fock:n=0')

    def test_without_config_file(self):
        config = RunConfig.from_args(argparse.Namespace(config=None, state='coherent:re=1,im=0'))
        self.assertEqual(config.state, 'coherent:re=1,im=0')
        self.assertEqual(config.mass, 1.0)


class TomogramCommandTest(OutputDirMixin, TomojointTestCase):

    def test_writes_grids_with_config_header(self):
        record = cmd_tomogram(self.config(state='fock:n=0', grid=SMALL_GRID))
        self.assertEqual(record['command'], 'tomogram')
        self.assertEqual(len(record['files']), 2)
        for path in record['files']:
            self.assertTrue(os.path.exists(path))
            with open(path + '.json') as handle:
                header = json.load(handle)
            self.assertEqual(header['config']['state'], 'fock:n=0')
            self.assertEqual(header['state'], str(record['state']))
        with open(os.path.join(self.out, 'tomogram.csv.json')) as handle:
            self.assertIn('slice_norms', json.load(handle))
        with open(os.path.join(self.out, 'joint.csv.json')) as handle:
            self.assertIn('prior', json.load(handle))

    def test_optical_slices_are_normalized(self):
        record = cmd_tomogram(self.config(state='fock:n=0', representation=OPTICAL, prior='p2-default'))
        self.assertLess(record['slice_norms']['max_deviation'], 1e-3)
        self.assertClose(record['joint_total'], 1.0, 1e-3)
        with open(os.path.join(self.out, 'tomogram.csv')) as handle:
            rows = sum(1 for _ in handle) - 1
        self.assertEqual(rows, 161 * 181)

    def test_coherent_position_slice_peak(self):
        record = cmd_tomogram(self.config(state='coherent:re=0.70710678,im=0', grid={
            'mu': (-2.0, 2.0, 9), 'nu': (-2.0, 2.0, 9)}))
        peak = record['position_slice_peak']
        self.assertEqual((peak['mu'], peak['nu']), (1.0, 0.0))
        self.assertClose(peak['X'], 1.0, 0.1)

    def test_radon_method(self):
        record = cmd_tomogram(self.config(state='gauss:q=0,p=0,s=2', method='radon', grid=dict(
            SMALL_GRID, q=(-6.0, 6.0, 121), p=(-6.0, 6.0, 121))))
        self.assertEqual(record['method'], 'radon')

    def test_identical_runs_write_identical_files(self):
        with tempfile.TemporaryDirectory() as other:
            first = cmd_tomogram(self.config(state='fock:n=1', grid=SMALL_GRID))
            second = cmd_tomogram(self.config(state='fock:n=1', grid=SMALL_GRID, out=other))
            for path, twin in zip(first['files'], second['files']):
                with open(path, 'rb') as a, open(twin, 'rb') as b:
                    self.assertEqual(a.read(), b.read())

    def test_plots(self):
        record = cmd_tomogram(self.config(state='fock:n=0', grid=SMALL_GRID, plot=True))
        svgs = [path for path in record['files'] if path.endswith('.svg')]
        self.assertEqual(len(svgs), 2)
        with open(svgs[0]) as handle:
            self.assertIn('<svg', handle.read())

    def test_missing_state(self):
        with self.assertRaises(UsageError):
            cmd_tomogram(self.config())

    def test_unwritable_output(self):
        blocker = os.path.join(self.out, 'file')
        with open(blocker, 'w') as handle:
            handle.write('')
        with self.assertRaises(UsageError):
            cmd_tomogram(self.config(state='fock:n=0', grid=SMALL_GRID, out=os.path.join(blocker, 'below')))


class ExpectCommandTest(OutputDirMixin, TomojointTestCase):

    def test_coherent_number(self):
        record = cmd_expect(self.config(state='coherent:re=1,im=0', op='n', grid=SYMBOL_GRID))
        self.assertClose(record['value']['re'], 1.0, 2e-2)
        self.assertClose(record['value']['im'], 0.0, 2e-2)
        self.assertClose(record['oracle']['re'], 1.0, 1e-12)
        self.assertLess(record['deviation'], 2e-2)
        self.assertTrue(os.path.exists(os.path.join(self.out, 'expect.json')))

    def test_singular_identity(self):
        record = cmd_expect(self.config(state='fock:n=2', op='one', symbol='singular', grid=SYMBOL_GRID))
        self.assertClose(record['value']['re'], 1.0, 1e-2)

    def test_singular_product_carries_commutator(self):
        record = cmd_expect(self.config(state='fock:n=0', op='qp', symbol='singular', grid=SYMBOL_GRID))
        self.assertClose(record['value']['im'], 0.5, 2e-2)

    def test_monomial_has_no_oracle(self):
        record = cmd_expect(self.config(state='fock:n=0', op='q2', symbol='monomial:2,0', grid=SYMBOL_GRID))
        self.assertIsNone(record['oracle'])
        self.assertClose(record['value']['re'], 0.5, 2e-2)

    def test_missing_op(self):
        with self.assertRaises(UsageError):
            cmd_expect(self.config(state='fock:n=0'))

    def test_singular_optical_is_rejected(self):
        with self.assertRaises(SymbolError):
            cmd_expect(self.config(state='fock:n=0', op='q', symbol='singular', representation=OPTICAL))


class ResidualCommandTest(OutputDirMixin, TomojointTestCase):

    def test_missing_check(self):
        with self.assertRaises(UsageError):
            residual_report(self.config(state='fock:n=0'))

    def test_flags_tied_to_their_check(self):
        with self.assertRaises(UsageError):
            residual_report(self.config(state='fock:n=0', check='stationary', representation=OPTICAL,
                                        printed_form=True))
        with self.assertRaises(UsageError):
            residual_report(self.config(state='fock:n=0', check='evolution', single_peak=True))

    def test_ground_state_is_stationary(self):
        record = cmd_residual(self.config(state='fock:n=0', check='stationary'))
        self.assertLess(record['relative'], 3e-2)
        self.assertEqual(record['metadata']['energy_source'], 'mean energy of the state')
        self.assertEqual(record['metadata']['energy'], 0.5)
        self.assertTrue(os.path.exists(os.path.join(self.out, 'residual.json')))

    def test_wrong_energy_is_rejected(self):
        record = cmd_residual(self.config(state='fock:n=0', check='stationary', energy=0.7))
        self.assertEqual(record['metadata']['energy_source'], 'config')
        self.assertGreater(record['scaled'], 0.15)

    def test_coherent_evolution_against_trajectory(self):
        record = cmd_residual(self.config(state='coherent:re=0.70710678,im=0', check='evolution', time=0.3,
                                          grid={'mu': (-4.0, 4.0, 65), 'nu': (-4.0, 4.0, 65)}))
        self.assertLess(record['relative'], 3e-2)
        self.assertEqual(record['metadata']['time'], 0.3)


class EvolveCommandTest(OutputDirMixin, TomojointTestCase):

    def test_frames(self):
        record = cmd_evolve(self.config(state='coherent:re=0.70710678,im=0', grid=STEPPER_GRID, dt=0.01, steps=4,
                                        snapshot_every=3))
        self.assertEqual([frame['step'] for frame in record['frames']], [0, 3, 4])
        self.assertClose(record['final_time'], 0.04, 1e-12)
        self.assertLess(record['mass_drift'], 1e-2)
        for frame in record['frames']:
            self.assertTrue(os.path.exists(os.path.join(self.out, frame['file'])))
        with open(os.path.join(self.out, 'frames.json')) as handle:
            self.assertEqual(len(json.load(handle)['frames']), 3)

    def test_needs_schedule(self):
        with self.assertRaises(UsageError):
            cmd_evolve(self.config(state='fock:n=0', dt=0.01))
        with self.assertRaises(UsageError):
            cmd_evolve(self.config(state='fock:n=0', dt=0.01, steps=2, snapshot_every=0))


class ReconstructCommandTest(OutputDirMixin, TomojointTestCase):

    def test_ground_state(self):
        record = cmd_reconstruct(self.config(state='fock:n=0'))
        self.assertLess(record['central_max_error'], 5e-3)
        self.assertTrue(os.path.exists(os.path.join(self.out, 'wigner.csv')))

    def test_symplectic_only(self):
        with self.assertRaises(UsageError):
            cmd_reconstruct(self.config(state='fock:n=0', representation=OPTICAL))


def cheap_checks():
    return [
        Check('small', 1, 'a value under its bound', 1.0, lambda context: 0.5),
        Check('large', 2, 'a value over its bound', 1.0, lambda context: 2.0),
        Check('separated', 7, 'a value over a lower bound', 0.1, lambda context: 0.3, at_least=True),
    ]


@mock.patch('tomojoint.cli.verify.deviation_ledger', return_value=DEVIATIONS)
class VerifyRunTest(OutputDirMixin, TomojointTestCase):

    def test_pass_and_fail(self, ledger):
        report = run_verify(self.config(), cheap_checks())
        self.assertEqual([result.passed for result in report.results], [True, False, True])
        self.assertFalse(report.passed)
        self.assertEqual(report.results[2].comparison, '>=')

    def test_tolerance_override(self, ledger):
        report = run_verify(self.config(tolerances={'large': 3.0}), cheap_checks())
        self.assertTrue(report.passed)
        self.assertEqual(report.results[1].tolerance, 3.0)

    def test_errors_become_failures(self, ledger):
        def broken(context):
            raise PriorUnderflow('prior underflow on grid')

        def nan(context):
            return float('nan')

        report = run_verify(self.config(), [Check('broken', 1, '', 1.0, broken), Check('nan', 1, '', 1.0, nan)])
        self.assertFalse(any(result.passed for result in report.results))
        self.assertEqual(report.results[0].error, 'prior underflow on grid')
        self.assertIsNone(report.results[0].value)

    def test_report_lists_deviations(self, ledger):
        report = run_verify(self.config(), cheap_checks()).to_dict()
        names = [deviation['name'] for deviation in report['deviations']]
        for name in REQUIRED_DEVIATIONS:
            self.assertIn(name, names)
        self.assertEqual(report['summary'], {'checks': 3, 'failed': 1, 'runtime': report['summary']['runtime']})

    def test_cmd_verify_writes_report(self, ledger):
        with mock.patch('tomojoint.cli.verify.default_checks', side_effect=cheap_checks):
            record = cmd_verify(self.config())
        self.assertFalse(record['passed'])
        self.assertIn('2 of 3 checks passed', record['table'])
        with open(os.path.join(self.out, 'verify.json')) as handle:
            written = json.load(handle)
        self.assertEqual(len(written['checks']), 3)
        self.assertNotIn('table', written)

    def test_results_name_their_grids(self, ledger):
        checks = cheap_checks() + [Check('own-grid', 2, 'a value on the stepper grid', 1.0, lambda context: 0.5,
                                         grids=('stepper',))]
        report = run_verify(self.config(grid={'X': (-6.0, 6.0, 61)}), checks)
        data = report.to_dict()
        self.assertEqual(data['checks'][0]['grids'], ['default'])
        self.assertEqual(data['checks'][3]['grids'], ['stepper'])
        self.assertEqual(data['grids']['default']['X'], [-6.0, 6.0, 61])
        self.assertEqual(data['grids']['default']['mu'], [-4.5, 4.5, 97])
        self.assertEqual(data['grids']['stepper'], {name: list(spec) for name, spec in STEPPER_AXES.items()})
        self.assertIn('stepper', report.table())

    def test_injected_energy_fails_ground_state(self, ledger):
        checks = [check for check in default_checks() if check.name == 'stationary-symplectic-fock0']
        self.assertTrue(run_verify(self.config(), checks).passed)
        self.assertFalse(run_verify(self.config(energy=0.7), checks).passed)


class VerifySuiteTest(TomojointTestCase):

    def test_check_names_are_unique(self):
        names = [check.name for check in default_checks()]
        self.assertEqual(len(names), len(set(names)))
        self.assertGreaterEqual(len(names), 30)
        self.assertEqual(sorted({check.criterion for check in default_checks()}), list(range(1, 12)))

    def test_ledger_evidence(self):
        context = VerifyContext(RunConfig(grid=SMALL_GRID))
        ledger = {deviation.name: deviation for deviation in deviation_ledger(context)}
        identity = ledger['identity-symbol-exponent'].evidence['printed_identity_average']
        self.assertGreater(abs(identity['re'] - 1.0), 0.5)
        self.assertGreater(ledger['stationary-kinetic-nu0-sign'].evidence['printed_discrepancy'], 1e-3)
        self.assertIsNone(ledger['joint-momentum-sign'].evidence)
        self.assertEqual(ledger['grid-stepper'].evidence['criteria'], [9])

    def test_every_moved_grid_is_in_the_ledger(self):
        deviations = {deviation.name: deviation for deviation in DEVIATIONS}
        for check in default_checks():
            for label in check.grids:
                if label == DEFAULT_GRID:
                    continue
                deviation = deviations['grid-{}'.format(label)]
                self.assertIn(check.criterion, deviation.evidence['criteria'], check.name)
                self.assertEqual(deviation.evidence['axes'], {name: list(spec) for name, spec in GRIDS[label].items()})
                self.assertTrue(deviation.printed.startswith('default grid X[-8, 8]x161, mu[-4.5, 4.5]x97'))

    def test_general_path_evolution_check(self):
        check = next(check for check in default_checks() if check.name == 'evolution-symplectic-coherent-general')
        self.assertEqual(check.grids, ('trajectory',))
        value = check.measure(VerifyContext(RunConfig()))
        self.assertTrue(check.passes(value, check.tolerance), value)

    def test_cheap_checks_pass(self):
        config = RunConfig()
        context = VerifyContext(config)
        for check in default_checks():
            if check.name in ('prior-moments', 'prior-moments-mismatched', 'deviation-ledger'):
                value = check.measure(context)
                self.assertTrue(check.passes(value, check.tolerance), '{}: {}'.format(check.name, value))


class CommandLineTest(OutputDirMixin, TomojointTestCase):

    def run_cli(self, *argv):
        with mock.patch('sys.stdout', new_callable=io.StringIO) as stdout, \
                mock.patch('sys.stderr', new_callable=io.StringIO):
            code = run(list(argv))
        return code, stdout.getvalue()

    def test_no_command_prints_help(self):
        code, output = self.run_cli()
        self.assertEqual(code, EXIT_OK)
        self.assertIn('exit codes', output)

    def test_tomogram(self):
        grid = ['--grid', 'x:-6,6,61', '--grid', 'mu:-2,2,9', '--grid', 'nu:-2,2,9']
        code, output = self.run_cli('tomogram', '--state', 'fock:n=0', '--out', self.out, *grid)
        self.assertEqual(code, EXIT_OK)
        record = json.loads(output)
        self.assertEqual(record['config']['grid']['X'], [-6.0, 6.0, 61])
        self.assertTrue(os.path.exists(os.path.join(self.out, 'joint.csv')))

    def test_usage_errors(self):
        self.assertEqual(self.run_cli('tomogram', '--out', self.out)[0], EXIT_USAGE)
        self.assertEqual(self.run_cli('tomogram', '--rep', 'wigner')[0], EXIT_USAGE)
        self.assertEqual(self.run_cli('transform')[0], EXIT_USAGE)
        self.assertEqual(self.run_cli('tomogram', '--state', 'fock:n=0', '--grid', 'x:1,2')[0], EXIT_USAGE)

    def test_numeric_failure(self):
        def blow_up(config):
            raise BlowUp('Non-finite values after step 3 (t=0.03)', 3, 0.03)

        with mock.patch.dict('tomojoint.cli.commands.COMMANDS', {'evolve': blow_up}):
            code, _ = self.run_cli('evolve', '--state', 'fock:n=0', '--out', self.out)
        self.assertEqual(code, EXIT_NUMERIC)

    def test_verify_exit_code(self):
        failed = {'passed': False, 'checks': [], 'table': 'FAIL'}
        with mock.patch('tomojoint.bin.tomojoint.cmd_verify', return_value=dict(failed)):
            code, output = self.run_cli('verify', '--out', self.out)
        self.assertEqual(code, EXIT_VERIFY_FAILED)
        self.assertEqual(output.strip(), 'FAIL')
        with mock.patch('tomojoint.bin.tomojoint.cmd_verify', return_value=dict(failed)):
            code, output = self.run_cli('verify', '--json', '--out', self.out)
        self.assertEqual(code, EXIT_VERIFY_FAILED)
        self.assertEqual(json.loads(output), {'passed': False, 'checks': []})
