"""
Congestion Control Benchmark

Single bottleneck link simulator, congestion control schemes, CC-Bench scenario grids and the winner based ranking.
"""

__all__ = [
    'helper_funcs',
    'netsim',
    'cc_schemes',
    'scenarios',
    'scoring',
    'harness',
    'ccbench_visualizer'
]
