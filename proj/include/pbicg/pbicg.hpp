#pragma once

#include "pbicg/errors.hpp"
#include "pbicg/matcore/csr_matrix.hpp"
#include "pbicg/matcore/generators.hpp"
#include "pbicg/matcore/matrix_market.hpp"
#include "pbicg/matcore/vector.hpp"
#include "pbicg/precond/ilu0.hpp"
#include "pbicg/precond/preconditioner.hpp"
#include "pbicg/krylov/bicg.hpp"
#include "pbicg/krylov/bicr.hpp"
#include "pbicg/krylov/isrv.hpp"
#include "pbicg/krylov/pbicg.hpp"
#include "pbicg/krylov/types.hpp"
#include "pbicg/verify/compare.hpp"
#include "pbicg/verify/dense.hpp"
#include "pbicg/verify/orthogonality.hpp"
#include "pbicg/verify/polynomial.hpp"
