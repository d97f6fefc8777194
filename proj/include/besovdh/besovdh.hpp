#pragma once

// Umbrella header: spectral core, Littlewood-Paley calculus, time-space
// norms, the Debye-Huckel solver stack, audits, experiments and IO.

#include "besovdh/audits.hpp"
#include "besovdh/bernstein.hpp"
#include "besovdh/chemin_lerner.hpp"
#include "besovdh/duhamel.hpp"
#include "besovdh/experiments.hpp"
#include "besovdh/field.hpp"
#include "besovdh/grid.hpp"
#include "besovdh/io.hpp"
#include "besovdh/littlewood_paley.hpp"
#include "besovdh/operators.hpp"
#include "besovdh/parallel.hpp"
#include "besovdh/random_fields.hpp"
#include "besovdh/run_config.hpp"
#include "besovdh/solver.hpp"
#include "besovdh/state.hpp"
#include "besovdh/trajectory.hpp"
#include "besovdh/transforms.hpp"
