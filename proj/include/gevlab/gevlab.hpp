#pragma once

#include "gevlab/eigen_counterexample.hpp"
#include "gevlab/errors.hpp"
#include "gevlab/fbi_transform.hpp"
#include "gevlab/finite_difference.hpp"
#include "gevlab/gevrey_detect.hpp"
#include "gevlab/operator_core.hpp"
#include "gevlab/precision.hpp"
#include "gevlab/quadrature.hpp"
#include "gevlab/report.hpp"
#include "gevlab/sampled_function.hpp"
#include "gevlab/stretched_fit.hpp"
