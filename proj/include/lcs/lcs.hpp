#ifndef LCS_LCS_HPP
#define LCS_LCS_HPP

#include "lcs/analysis.hpp"
#include "lcs/error.hpp"
#include "lcs/fwht.hpp"
#include "lcs/haar.hpp"
#include "lcs/lorentzian.hpp"
#include "lcs/model.hpp"
#include "lcs/noise.hpp"
#include "lcs/rng.hpp"
#include "lcs/solvers.hpp"
#include "lcs/thresholding.hpp"
#include "lcs/types.hpp"

#include "lcs/harness/bounds.hpp"
#include "lcs/harness/config.hpp"
#include "lcs/harness/experiment.hpp"
#include "lcs/harness/image.hpp"
#include "lcs/harness/report.hpp"
#include "lcs/harness/signal.hpp"
#include "lcs/harness/timing.hpp"

#endif  // LCS_LCS_HPP
