public class Base {

    public Base() {
    }
}
