#pragma once

#include "entrate/algebraic.hpp"
#include "entrate/condition1.hpp"
#include "entrate/config.hpp"
#include "entrate/entropy.hpp"
#include "entrate/error.hpp"
#include "entrate/log_base.hpp"
#include "entrate/model.hpp"
#include "entrate/oracle.hpp"
#include "entrate/support.hpp"
