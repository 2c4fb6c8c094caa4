#pragma once

#include "adiapass/errors.hpp"
#include "adiapass/linalg.hpp"
#include "adiapass/model.hpp"
#include "adiapass/spectral.hpp"
#include "adiapass/perturbation.hpp"
#include "adiapass/dynamics.hpp"
#include "adiapass/parallel.hpp"
#include "adiapass/experiments.hpp"
#include "adiapass/cli.hpp"
