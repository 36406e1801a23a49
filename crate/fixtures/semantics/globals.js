// outcome: value
print(window.window === window);
var x = 0;
window.x = 50;
print(x);
x = 100;
print(window.x);
