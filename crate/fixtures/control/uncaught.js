// outcome: uncaught_error
print("before");
try { throw 1 } finally { print("finally runs") }
print("never");
