#ifndef CDRESS_CDRESS_HPP
#define CDRESS_CDRESS_HPP

#include "cdress/algebra.hpp"
#include "cdress/cartan.hpp"
#include "cdress/dressing.hpp"
#include "cdress/errors.hpp"
#include "cdress/expr.hpp"
#include "cdress/forms.hpp"
#include "cdress/jet.hpp"
#include "cdress/lagrangian.hpp"
#include "cdress/matrix.hpp"
#include "cdress/spinor.hpp"

#endif  // CDRESS_CDRESS_HPP
