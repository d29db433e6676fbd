from pnpreg.services.harness.reporting import emit_trace_csv, read_trace_csv
from pnpreg.services.harness.workflow import ExperimentWorkflow, run_experiment
